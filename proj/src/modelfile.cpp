#include "wpg/modelfile.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace wpg {

namespace {

struct Value {
  enum Kind { Int, Float, Str, Array } kind = Int;
  long long i = 0;
  double f = 0;
  std::string s;
  std::vector<Value> arr;
  int line = 0, col = 0;
};

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void advance() {
    if (pos < text.size() && text[pos] == '\n') {
      ++line;
      col = 0;
    }
    ++pos;
    ++col;
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool eof() const { return pos >= text.size(); }

  void skip_space(bool newlines) {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        advance();
      } else {
        break;
      }
    }
  }
};

Value parse_value(Lexer& lx);

Value parse_array(Lexer& lx) {
  Value v;
  v.kind = Value::Array;
  v.line = lx.line;
  v.col = lx.col;
  lx.advance();  // consume '['
  lx.skip_space(true);
  while (!lx.eof() && lx.peek() != ']') {
    v.arr.push_back(parse_value(lx));
    lx.skip_space(true);
    if (lx.peek() == ',') {
      lx.advance();
      lx.skip_space(true);
    }
  }
  if (lx.peek() != ']') throw ParseError("unterminated array", v.line, v.col);
  lx.advance();
  return v;
}

Value parse_value(Lexer& lx) {
  lx.skip_space(true);
  Value v;
  v.line = lx.line;
  v.col = lx.col;
  char c = lx.peek();
  if (c == '[') return parse_array(lx);
  if (c == '"') {
    lx.advance();
    v.kind = Value::Str;
    while (!lx.eof() && lx.peek() != '"') {
      v.s += lx.peek();
      lx.advance();
    }
    if (lx.peek() != '"') throw ParseError("unterminated string", v.line, v.col);
    lx.advance();
    return v;
  }
  std::string tok;
  while (!lx.eof()) {
    char ch = lx.peek();
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '+' || ch == '-' || ch == '.' ||
        ch == '_') {
      tok += ch;
      lx.advance();
    } else {
      break;
    }
  }
  if (tok.empty()) throw ParseError("expected a value", v.line, v.col);
  if (tok.find('.') != std::string::npos || tok.find('e') != std::string::npos ||
      tok.find('E') != std::string::npos) {
    v.kind = Value::Float;
    try {
      v.f = std::stod(tok);
    } catch (...) {
      throw ParseError("bad numeric literal '" + tok + "'", v.line, v.col);
    }
    return v;
  }
  v.kind = Value::Int;
  try {
    v.i = std::stoll(tok);
  } catch (...) {
    throw ParseError("bad integer literal '" + tok + "'", v.line, v.col);
  }
  return v;
}

struct Document {
  std::map<std::string, Value> header;
  std::vector<std::map<std::string, Value>> coeff_blocks;
};

Document parse_document(const std::string& text) {
  Lexer lx(text);
  Document doc;
  std::map<std::string, Value>* target = &doc.header;
  while (true) {
    lx.skip_space(true);
    if (lx.eof()) break;
    if (lx.peek() == '[') {
      int line = lx.line, col = lx.col;
      lx.advance();
      if (lx.peek() != '[') throw ParseError("expected [[coeff]] table header", line, col);
      lx.advance();
      std::string name;
      while (!lx.eof() && lx.peek() != ']') {
        name += lx.peek();
        lx.advance();
      }
      if (lx.peek() != ']') throw ParseError("unterminated table header", line, col);
      lx.advance();
      if (lx.peek() != ']') throw ParseError("expected ]] in table header", line, col);
      lx.advance();
      if (name != "coeff")
        throw ParseError("unknown table '" + name + "' (only [[coeff]] is recognized)", line,
                         col);
      doc.coeff_blocks.emplace_back();
      target = &doc.coeff_blocks.back();
      continue;
    }
    // key = value
    int line = lx.line, col = lx.col;
    std::string key;
    while (!lx.eof()) {
      char ch = lx.peek();
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
        key += ch;
        lx.advance();
      } else {
        break;
      }
    }
    if (key.empty()) throw ParseError("expected a key", line, col);
    lx.skip_space(false);
    if (lx.peek() != '=') throw ParseError("expected '=' after key '" + key + "'", lx.line, lx.col);
    lx.advance();
    lx.skip_space(false);
    if ((*target).count(key)) throw ParseError("duplicate key '" + key + "'", line, col);
    (*target)[key] = parse_value(lx);
  }
  return doc;
}

const Value& require(const std::map<std::string, Value>& tbl, const std::string& key) {
  auto it = tbl.find(key);
  if (it == tbl.end()) throw ParseError("missing required field '" + key + "'", 1, 1);
  return it->second;
}

long long require_int(const std::map<std::string, Value>& tbl, const std::string& key) {
  const Value& v = require(tbl, key);
  if (v.kind != Value::Int) throw ParseError("field '" + key + "' must be an integer", v.line, v.col);
  return v.i;
}

BigRat value_rational(const Value& v, const std::string& what) {
  if (v.kind == Value::Int) return BigRat(v.i);
  if (v.kind == Value::Str) {
    try {
      return rat_from_string(v.s);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string(e.what()) + " in " + what, v.line, v.col);
    }
  }
  if (v.kind == Value::Float)
    throw ParseError("float literal not allowed in " + what + "; write \"p/q\"", v.line, v.col);
  throw ParseError("expected a rational in " + what, v.line, v.col);
}

double value_number(const Value& v, const std::string& what) {
  if (v.kind == Value::Int) return double(v.i);
  if (v.kind == Value::Float) return v.f;
  throw ParseError("expected a number in " + what, v.line, v.col);
}

RatMat value_matrix(const Value& v, int n, const std::string& what) {
  if (v.kind != Value::Array || static_cast<int>(v.arr.size()) != n)
    throw ParseError(what + " must be a " + std::to_string(n) + "x" + std::to_string(n) +
                         " matrix",
                     v.line, v.col);
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) {
    const Value& row = v.arr[i];
    if (row.kind != Value::Array || static_cast<int>(row.arr.size()) != n)
      throw ParseError(what + " row " + std::to_string(i) + " must have " + std::to_string(n) +
                           " entries",
                       row.line, row.col);
    for (int j = 0; j < n; ++j) m.at(i, j) = value_rational(row.arr[j], what);
  }
  return m;
}

}  // namespace

VHSModel parse_model_text(const std::string& text) {
  Document doc = parse_document(text);
  int n = static_cast<int>(require_int(doc.header, "weight"));
  int b = static_cast<int>(require_int(doc.header, "rank"));
  int m = static_cast<int>(require_int(doc.header, "dim"));
  int k = static_cast<int>(require_int(doc.header, "punctures"));
  if (n < 0 || b <= 0 || m <= 0 || k < 0 || k > m)
    throw ParseError("inconsistent dimensions (need weight >= 0, rank > 0, 0 <= punctures <= dim)",
                     1, 1);

  BigRat radius = value_rational(require(doc.header, "radius"), "radius");

  const Value& bp = require(doc.header, "base_point");
  if (bp.kind != Value::Array || static_cast<int>(bp.arr.size()) != m)
    throw ParseError("base_point must list one [re, im] pair per variable", bp.line, bp.col);
  std::vector<std::complex<double>> base(m);
  for (int i = 0; i < m; ++i) {
    const Value& p = bp.arr[i];
    if (p.kind != Value::Array || p.arr.size() != 2)
      throw ParseError("base_point entries are [re, im] pairs", p.line, p.col);
    base[i] = {value_number(p.arr[0], "base_point"), value_number(p.arr[1], "base_point")};
  }

  RatMat Q = value_matrix(require(doc.header, "Q"), b, "Q");

  const Value& nv = require(doc.header, "N");
  if (nv.kind != Value::Array || static_cast<int>(nv.arr.size()) != k)
    throw ParseError("N must list one matrix per puncture", nv.line, nv.col);
  std::vector<RatMat> N;
  for (int j = 0; j < k; ++j) N.push_back(value_matrix(nv.arr[j], b, "N"));

  std::optional<int> trunc;
  if (doc.header.count("truncated_at"))
    trunc = static_cast<int>(require_int(doc.header, "truncated_at"));

  std::vector<RatMat> T;
  if (doc.header.count("T")) {
    const Value& tv = doc.header.at("T");
    if (tv.kind != Value::Array || static_cast<int>(tv.arr.size()) != k)
      throw ParseError("T must list one monodromy matrix per puncture", tv.line, tv.col);
    for (int j = 0; j < k; ++j) T.push_back(value_matrix(tv.arr[j], b, "T"));
  }

  if (doc.coeff_blocks.empty())
    throw ParseError("at least one [[coeff]] block is required", 1, 1);
  std::vector<CoeffRecord> coeffs;
  for (const auto& blk : doc.coeff_blocks) {
    CoeffRecord rec;
    const Value& pw = require(blk, "powers");
    if (pw.kind != Value::Array || static_cast<int>(pw.arr.size()) != m)
      throw ParseError("powers must list one exponent per variable", pw.line, pw.col);
    for (const Value& e : pw.arr) {
      if (e.kind != Value::Int || e.i < 0)
        throw ParseError("powers entries are nonnegative integers", e.line, e.col);
      rec.powers.push_back(static_cast<int>(e.i));
    }
    const Value& re = require(blk, "re");
    const Value& im = require(blk, "im");
    if (re.kind != Value::Array || static_cast<int>(re.arr.size()) != b ||
        im.kind != Value::Array || static_cast<int>(im.arr.size()) != b)
      throw ParseError("re/im must list one rational per basis vector", re.line, re.col);
    for (int p = 0; p < b; ++p)
      rec.value.push_back(
          {value_rational(re.arr[p], "coeff re"), value_rational(im.arr[p], "coeff im")});
    coeffs.push_back(std::move(rec));
  }

  return VHSModel(n, b, m, k, std::move(Q), std::move(N), std::move(coeffs), std::move(radius),
                  std::move(base), trunc, std::move(T));
}

VHSModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_text(ss.str());
}

std::string model_to_text(const VHSModel& model) {
  std::ostringstream os;
  os.precision(17);
  os << "weight = " << model.weight() << "\n";
  os << "rank = " << model.rank() << "\n";
  os << "dim = " << model.vars() << "\n";
  os << "punctures = " << model.punctures() << "\n";
  os << "radius = \"" << rat_to_string(model.radius()) << "\"\n";
  os << "base_point = [";
  for (int i = 0; i < model.vars(); ++i) {
    if (i) os << ", ";
    os << "[" << model.base_point()[i].real() << ", " << model.base_point()[i].imag() << "]";
  }
  os << "]\n";
  auto emit_matrix = [&](const RatMat& m) {
    os << "[";
    for (int i = 0; i < m.rows(); ++i) {
      if (i) os << ", ";
      os << "[";
      for (int j = 0; j < m.cols(); ++j) {
        if (j) os << ", ";
        os << "\"" << rat_to_string(m.at(i, j)) << "\"";
      }
      os << "]";
    }
    os << "]";
  };
  os << "Q = ";
  emit_matrix(model.Q());
  os << "\n";
  os << "N = [";
  for (size_t j = 0; j < model.nilpotents().size(); ++j) {
    if (j) os << ", ";
    emit_matrix(model.nilpotents()[j]);
  }
  os << "]\n";
  if (model.has_monodromies()) {
    os << "T = [";
    for (int j = 0; j < model.punctures(); ++j) {
      if (j) os << ", ";
      emit_matrix(model.monodromy(j));
    }
    os << "]\n";
  }
  if (model.truncated_at()) os << "truncated_at = " << *model.truncated_at() << "\n";
  for (const auto& rec : model.coeffs()) {
    os << "\n[[coeff]]\npowers = [";
    for (size_t i = 0; i < rec.powers.size(); ++i) {
      if (i) os << ", ";
      os << rec.powers[i];
    }
    os << "]\nre = [";
    for (size_t p = 0; p < rec.value.size(); ++p) {
      if (p) os << ", ";
      os << "\"" << rat_to_string(rec.value[p].re) << "\"";
    }
    os << "]\nim = [";
    for (size_t p = 0; p < rec.value.size(); ++p) {
      if (p) os << ", ";
      os << "\"" << rat_to_string(rec.value[p].im) << "\"";
    }
    os << "]\n";
  }
  return os.str();
}

void save_model_file(const VHSModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write model file: " + path);
  out << model_to_text(model);
}

std::string content_hash(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open file for hashing: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return content_hash(ss.str());
}

}  // namespace wpg
