// wpg: batch front end for Weil-Petersson geometry on nilpotent-orbit models.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "wpg/degeneration.hpp"
#include "wpg/modelfile.hpp"
#include "wpg/quadrature.hpp"
#include "wpg/ratrec.hpp"
#include "wpg/wpmetric.hpp"

using json = nlohmann::json;
using namespace wpg;
using C = std::complex<double>;

namespace {

int thread_count(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("WPG_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.size() < 3) throw std::invalid_argument("need at least 3 eps values");
  return out;
}

std::vector<std::vector<C>> parse_points(const std::string& s, int vars) {
  std::vector<std::vector<C>> pts;
  std::stringstream ss(s);
  std::string ptok;
  while (std::getline(ss, ptok, ';')) {
    std::vector<double> nums;
    std::stringstream ps(ptok);
    std::string n;
    while (std::getline(ps, n, ',')) nums.push_back(std::stod(n));
    if (static_cast<int>(nums.size()) != 2 * vars)
      throw std::invalid_argument("each point needs re,im per variable");
    std::vector<C> z(vars);
    for (int i = 0; i < vars; ++i) z[i] = {nums[2 * i], nums[2 * i + 1]};
    pts.push_back(std::move(z));
  }
  return pts;
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << report.dump(2) << "\n";
  }
}

struct ChartArgs {
  std::string chart = "modular";
  double r_in = 0.0, r_out = 0.0;
};

ChartSpec make_chart(const ChartArgs& a, const VHSModel& model) {
  if (a.chart == "modular") return ChartSpec::modular_chart();
  if (a.chart == "annulus") {
    if (!(a.r_in >= 0 && a.r_out > a.r_in))
      throw std::invalid_argument("annulus chart needs 0 <= r-in < r-out");
    ChartSpec c;
    c.vars = model.vars();
    c.punctures = model.punctures();
    c.radial.assign(model.punctures(), {a.r_in, a.r_out});
    return c;
  }
  throw std::invalid_argument("unknown chart '" + a.chart + "' (modular or annulus)");
}

json config_json(const std::string& model_path, const json& extra) {
  json cfg = extra;
  cfg["model"] = model_path;
  cfg["model_hash"] = file_hash(model_path);
  return cfg;
}

json integral_report(const std::string& model_path, const VHSModel& model, const ChartArgs& ca,
                     int k, int l, const std::vector<double>& eps, int level, int threads,
                     long max_den, const std::string& csv_cells, const std::string& plot) {
  GeometryContext ctx(model);
  ChartSpec chart = make_chart(ca, model);
  QuadratureOptions opts;
  opts.threads = threads;

  std::vector<IntegralEstimate> estimates;
  for (size_t i = 0; i < eps.size(); ++i) {
    QuadratureOptions o = opts;
    if (!csv_cells.empty() && i + 1 == eps.size()) o.csv_path = csv_cells;
    estimates.push_back(integrate_form(ctx, chart, k, l, eps[i], level, o));
  }
  auto lim = eps_limit(estimates);
  auto rec = rationalize(lim.value, std::max(lim.uncertainty, 1e-15), BigInt(max_den));

  json rep;
  rep["config"] = config_json(model_path, {{"chart", ca.chart},
                                           {"k", k},
                                           {"l", l},
                                           {"eps", eps},
                                           {"level", level},
                                           {"threads", threads},
                                           {"max_den", max_den}});
  rep["estimates"] = json::array();
  for (const auto& e : estimates)
    rep["estimates"].push_back({{"eps", e.eps},
                                {"value", e.value},
                                {"bracket", e.bracket},
                                {"cells", e.cells},
                                {"level", e.level}});
  rep["value"] = lim.value;
  rep["uncertainty"] = lim.uncertainty;
  rep["cauchy"] = lim.cauchy;
  rep["extrapolation_points"] = lim.used_points;
  if (rec.found) {
    rep["rational"] = {{"num", rec.candidate.num.convert_to<long long>()},
                       {"den", rec.candidate.den.convert_to<long long>()},
                       {"unique", true}};
  } else {
    rep["rational"] = {{"unique", false}, {"message", rec.message}};
  }

  if (!plot.empty()) {
    std::ofstream csv(plot + ".csv");
    csv << "eps,value,bracket\n";
    for (const auto& e : estimates)
      csv << e.eps << "," << e.value << "," << e.bracket << "\n";
    std::ofstream gp(plot + ".gp");
    gp << "set datafile separator ','\n"
       << "set xlabel 'eps'\nset ylabel 'estimate'\n"
       << "plot '" << plot << ".csv' using 1:2:3 with yerrorlines title 'integral', \\\n"
       << "     " << lim.value << " with lines title 'extrapolated'\n";
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weil-Petersson geometry of nilpotent-orbit models"};
  app.require_subcommand(1);

  std::string model_path, out_path, csv_cells, plot_path;
  int threads_flag = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("model", model_path, "model file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_path, "write the JSON report to a file");
    cmd->add_option("--threads", threads_flag, "worker threads (or WPG_THREADS)");
  };

  // check
  auto* c_check = app.add_subcommand("check", "validate a model file");
  add_common(c_check);

  // volume / chern
  ChartArgs chart_args;
  std::string eps_str = "0.1,0.05,0.025";
  int level = 2, form_k = 0, form_l = 0;
  long max_den = 1000000;
  auto add_integral_opts = [&](CLI::App* cmd) {
    add_common(cmd);
    cmd->add_option("--chart", chart_args.chart, "modular or annulus")->capture_default_str();
    cmd->add_option("--r-in", chart_args.r_in, "annulus inner radius");
    cmd->add_option("--r-out", chart_args.r_out, "annulus outer radius");
    cmd->add_option("--eps", eps_str, "decreasing cut-off list")->capture_default_str();
    cmd->add_option("--level", level, "refinement level")->capture_default_str();
    cmd->add_option("--max-den", max_den, "denominator cap for reconstruction")
        ->capture_default_str();
    cmd->add_option("--csv-cells", csv_cells, "per-cell audit CSV (finest eps run)");
    cmd->add_option("--plot", plot_path, "write <path>.csv and <path>.gp");
  };
  auto* c_volume = app.add_subcommand("volume", "integrate omega_WP^m over a chart");
  add_integral_opts(c_volume);
  auto* c_chern = app.add_subcommand("chern", "integrate Ric^k wedge omega^l over a chart");
  add_integral_opts(c_chern);
  c_chern->add_option("--k", form_k, "Ricci form power")->required();
  c_chern->add_option("--l", form_l, "Kaehler form power")->required();

  // degorder
  int divisor = 0;
  auto* c_deg = app.add_subcommand("degorder", "degeneration order along a divisor");
  add_common(c_deg);
  c_deg->add_option("--divisor", divisor, "divisor index")->capture_default_str();

  // curvature
  std::string at_str;
  bool extended = false;
  auto* c_curv = app.add_subcommand("curvature", "pointwise curvature tensors");
  add_common(c_curv);
  c_curv->add_option("--at", at_str, "points 're,im[,re,im...]' joined by ';'")->required();
  c_curv->add_flag("--extended", extended, "evaluate in extended precision");

  // reduce
  std::string reduce_out;
  auto* c_reduce = app.add_subcommand("reduce", "unipotent reduction by base change");
  add_common(c_reduce);
  c_reduce->add_option("-o,--output", reduce_out, "reduced model file")->required();

  // rationalize
  std::string val_str, err_str;
  long rz_max_den = 1000000;
  auto* c_rz = app.add_subcommand("rationalize", "certified rational reconstruction");
  c_rz->add_option("value", val_str, "estimate (decimal or p/q)")->required();
  c_rz->add_option("err", err_str, "error bound (decimal or p/q)")->required();
  c_rz->add_option("--max-den", rz_max_den, "denominator cap")->capture_default_str();
  c_rz->add_option("--out", out_path, "write the JSON report to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_check) {
      auto model = load_model_file(model_path);
      auto rep = validate(model);
      auto untw = untwist_check(model, 8);
      json out;
      out["config"] = config_json(model_path, {});
      out["checks"] = json::array();
      for (const auto& c : rep.checks)
        out["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      out["untwist"] = {{"single_valued", untw.single_valued},
                        {"bounded", untw.bounded},
                        {"max_cut_residual", untw.max_cut_residual},
                        {"max_growth_ratio", untw.max_growth_ratio}};
      bool ok = rep.all_passed() && untw.single_valued && untw.bounded;
      out["pass"] = ok;
      emit(out, out_path);
      return ok ? 0 : 1;
    }

    if (*c_volume || *c_chern) {
      auto model = load_model_file(model_path);
      int k = (*c_chern) ? form_k : 0;
      int l = (*c_chern) ? form_l : model.vars();
      auto rep = integral_report(model_path, model, chart_args, k, l, parse_eps_list(eps_str),
                                 level, thread_count(threads_flag), max_den, csv_cells,
                                 plot_path);
      emit(rep, out_path);
      return 0;
    }

    if (*c_deg) {
      auto model = load_model_file(model_path);
      auto d = degeneration_order(model, divisor);
      auto probe = order_constancy_probe(model, divisor, 12);
      json out;
      out["config"] = config_json(model_path, {{"divisor", divisor}});
      out["k"] = d.k;
      out["l"] = d.l;
      out["tau"] = d.tau;
      out["leading_constant"] = d.leading_constant;
      out["samples"] = probe.samples_used;
      out["skipped"] = probe.samples_skipped;
      out["constant"] = probe.constant;
      out["violations"] = probe.notes;
      emit(out, out_path);
      return 0;
    }

    if (*c_curv) {
      auto model = load_model_file(model_path);
      GeometryContext ctx(model);
      json out;
      out["config"] = config_json(model_path, {{"extended", extended}});
      out["points"] = json::array();
      for (const auto& z : parse_points(at_str, model.vars())) {
        json pj;
        pj["z"] = json::array();
        for (const auto& c : z) pj["z"].push_back({c.real(), c.imag()});
        auto g = wp_metric<double>(ctx, std::span<const C>(z));
        auto Rs = strominger_curvature<double>(ctx, std::span<const C>(z));
        auto Rd = curvature_direct<double>(ctx, std::span<const C>(z));
        auto ric = ricci_contract<double>(g, Rd);
        double resid = 0, scale = 0;
        for (size_t i = 0; i < Rs.r.size(); ++i) {
          resid = std::max(resid, std::abs(Rs.r[i] - Rd.r[i]));
          scale = std::max(scale, std::abs(Rd.r[i]));
        }
        pj["metric"] = json::array();
        pj["ricci"] = json::array();
        const int m = model.vars();
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            pj["metric"].push_back({i, j, g.g(i, j).real(), g.g(i, j).imag()});
            pj["ricci"].push_back({i, j, ric(i, j).real(), ric(i, j).imag()});
          }
        pj["curvature"] = json::array();
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int kk = 0; kk < m; ++kk)
              for (int ll = 0; ll < m; ++ll)
                pj["curvature"].push_back({i, j, kk, ll, Rs.at(i, j, kk, ll).real(),
                                           Rs.at(i, j, kk, ll).imag()});
        pj["strominger_vs_direct_residual"] = scale > 0 ? resid / scale : 0.0;
        if (extended) {
          std::vector<std::complex<long double>> zl(z.size());
          for (size_t i = 0; i < z.size(); ++i) zl[i] = {z[i].real(), z[i].imag()};
          auto gl = wp_metric<long double>(ctx, std::span<const std::complex<long double>>(zl));
          pj["metric_extended_00"] = {double(gl.g(0, 0).real()), double(gl.g(0, 0).imag())};
        }
        out["points"].push_back(pj);
      }
      emit(out, out_path);
      return 0;
    }

    if (*c_reduce) {
      auto model = load_model_file(model_path);
      std::vector<MonodromyOperator> mono;
      for (int j = 0; j < model.punctures(); ++j)
        mono.push_back(jordan_chevalley(model.monodromy(j)));
      auto red = unipotent_reduction(model, mono);
      save_model_file(red, reduce_out);
      json out;
      out["config"] = config_json(model_path, {{"output", reduce_out}});
      out["orders"] = json::array();
      for (const auto& mo : mono) out["orders"].push_back(mo.order ? *mo.order : -1);
      out["written"] = reduce_out;
      emit(out, out_path);
      return 0;
    }

    if (*c_rz) {
      auto parse_exact = [](const std::string& s) {
        if (s.find('/') != std::string::npos) return rat_from_string(s);
        return rat_from_double(std::stod(s));
      };
      auto r = rationalize(parse_exact(val_str), parse_exact(err_str), BigInt(rz_max_den));
      json out;
      out["found"] = r.found;
      if (r.candidate.den != 0) {
        out["candidate"] = {{"num", r.candidate.num.convert_to<long long>()},
                            {"den", r.candidate.den.convert_to<long long>()}};
        if (r.candidate.next_denominator != 0)
          out["next_denominator"] = r.candidate.next_denominator.convert_to<long long>();
      }
      if (!r.message.empty()) out["message"] = r.message;
      emit(out, out_path);
      return r.found ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
