#include "euler/laurent.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

namespace euler {

using nlohmann::json;

bool GradedLexLess::operator()(const Exponent& a, const Exponent& b) const {
  long da = std::accumulate(a.begin(), a.end(), 0L);
  long db = std::accumulate(b.begin(), b.end(), 0L);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

LaurentPolynomial LaurentPolynomial::constant(size_t nvars, const Rational& c) {
  LaurentPolynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

LaurentPolynomial LaurentPolynomial::monomial(const Exponent& e, const Rational& c) {
  LaurentPolynomial p(e.size());
  p.add_term(e, c);
  return p;
}

LaurentPolynomial LaurentPolynomial::variable(size_t nvars, size_t j) {
  Exponent e(nvars, 0);
  e.at(j) = 1;
  return monomial(e);
}

void LaurentPolynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != nvars_) throw std::invalid_argument("exponent length does not match nvars");
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Rational LaurentPolynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Exponent> LaurentPolynomial::support() const {
  std::vector<Exponent> out;
  for (const auto& [e, c] : terms_) out.push_back(e);
  return out;
}

bool LaurentPolynomial::has_positive_coefficients() const {
  if (terms_.empty()) return false;
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

bool LaurentPolynomial::has_negative_exponents() const {
  for (const auto& [e, c] : terms_)
    for (int k : e)
      if (k < 0) return true;
  return false;
}

Exponent LaurentPolynomial::min_exponents() const {
  Exponent m(nvars_, 0);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    for (size_t j = 0; j < nvars_; ++j) m[j] = first ? e[j] : std::min(m[j], e[j]);
    first = false;
  }
  return m;
}

int LaurentPolynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

LaurentPolynomial LaurentPolynomial::operator-() const {
  LaurentPolynomial r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& b) {
  if (nvars_ != b.nvars_) throw std::invalid_argument("nvars mismatch");
  for (const auto& [e, c] : b.terms_) add_term(e, c);
  return *this;
}

LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  LaurentPolynomial r(a);
  r += b;
  return r;
}

LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) { return a + (-b); }

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("nvars mismatch");
  LaurentPolynomial r(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e(ea);
      for (size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
      r.add_term(e, ca * cb);
    }
  return r;
}

LaurentPolynomial operator*(const Rational& c, const LaurentPolynomial& a) {
  LaurentPolynomial r(a.nvars_);
  for (const auto& [e, x] : a.terms_) r.add_term(e, c * x);
  return r;
}

LaurentPolynomial& LaurentPolynomial::operator*=(const LaurentPolynomial& b) {
  *this = *this * b;
  return *this;
}

LaurentPolynomial LaurentPolynomial::shifted(const Exponent& shift) const {
  LaurentPolynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponent f(e);
    for (size_t j = 0; j < nvars_; ++j) f[j] += shift[j];
    r.add_term(f, c);
  }
  return r;
}

LaurentPolynomial LaurentPolynomial::pow(unsigned k) const {
  LaurentPolynomial r = constant(nvars_, 1);
  for (unsigned i = 0; i < k; ++i) r *= *this;
  return r;
}

std::vector<std::string> default_vars(size_t n, const std::string& stem) {
  std::vector<std::string> v;
  for (size_t j = 0; j < n; ++j) v.push_back(stem + std::to_string(j + 1));
  return v;
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  LaurentPolynomial run() {
    LaurentPolynomial p = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  LaurentPolynomial expr() {
    skip();
    LaurentPolynomial acc(vars_.size());
    bool negate = false;
    if (eat('-')) negate = true;
    else eat('+');
    LaurentPolynomial t = term();
    acc += negate ? -t : t;
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc += -term();
      else break;
    }
    return acc;
  }

  LaurentPolynomial term() {
    LaurentPolynomial acc = power();
    for (;;) {
      if (eat('*')) {
        acc *= power();
      } else if (eat('/')) {
        size_t at = pos_;
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
          throw ParseError("division is only allowed by integer literals", at);
        BigInt d = integer();
        if (d == 0) throw ParseError("division by zero", at);
        acc = Rational(BigInt(1), d) * acc;
      } else {
        break;
      }
    }
    return acc;
  }

  LaurentPolynomial power() {
    size_t at = pos_;
    LaurentPolynomial base = primary();
    if (!eat('^')) return base;
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected integer exponent", pos_);
    long k = integer().convert_to<long>();
    if (!neg) return base.pow(static_cast<unsigned>(k));
    if (base.size() != 1) throw ParseError("negative power of a non-monomial", at);
    const auto& [e, c] = *base.terms().begin();
    Exponent inv(e.size());
    for (size_t j = 0; j < e.size(); ++j) inv[j] = -e[j];
    return LaurentPolynomial::monomial(inv, 1 / c).pow(static_cast<unsigned>(k));
  }

  LaurentPolynomial primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      LaurentPolynomial inner = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return LaurentPolynomial::constant(vars_.size(), Rational(integer()));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) throw ParseError("unknown variable '" + name + "'", start);
      return LaurentPolynomial::variable(vars_.size(), static_cast<size_t>(it - vars_.begin()));
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  BigInt integer() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return BigInt(s_.substr(start, pos_ - start));
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;
};

std::string monomial_text(const Exponent& e, const std::vector<std::string>& vars) {
  std::string out;
  for (size_t j = 0; j < e.size(); ++j) {
    if (e[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[j];
    if (e[j] != 1) out += "^" + std::to_string(e[j]);
  }
  return out;
}

}  // namespace

LaurentPolynomial parse(const std::string& text, const std::vector<std::string>& vars) {
  if (vars.empty()) throw std::invalid_argument("at least one variable is required");
  return Parser(text, vars).run();
}

std::string to_string(const LaurentPolynomial& f, const std::vector<std::string>& vars) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : f.terms()) {
    std::string mono = monomial_text(e, vars);
    Rational a = abs(c);
    std::string body;
    if (mono.empty()) body = to_string(a);
    else if (a == 1) body = mono;
    else body = to_string(a) + "*" + mono;
    if (out.empty()) out = (c < 0 ? "-" : "") + body;
    else out += (c < 0 ? " - " : " + ") + body;
  }
  return out;
}

json to_json(const LaurentPolynomial& f, const std::vector<std::string>& vars) {
  json terms = json::array();
  for (const auto& [e, c] : f.terms())
    terms.push_back({{"exp", e}, {"num", numerator_of(c).str()}, {"den", denominator_of(c).str()}});
  return {{"vars", vars}, {"terms", terms}};
}

namespace {
BigInt big_from_json(const json& v) {
  if (v.is_string()) return BigInt(v.get<std::string>());
  if (v.is_number_integer()) return BigInt(v.get<long long>());
  throw std::invalid_argument("expected an integer");
}
}  // namespace

LaurentPolynomial polynomial_from_json(const json& j, std::vector<std::string>* vars) {
  auto names = j.at("vars").get<std::vector<std::string>>();
  LaurentPolynomial p(names.size());
  for (const auto& t : j.at("terms")) {
    Exponent e = t.at("exp").get<Exponent>();
    BigInt num = big_from_json(t.at("num"));
    BigInt den = t.contains("den") ? big_from_json(t.at("den")) : BigInt(1);
    if (den == 0) throw std::invalid_argument("zero denominator");
    p.add_term(e, Rational(num, den));
  }
  if (vars) *vars = names;
  return p;
}

cplx evaluate(const LaurentPolynomial& f, const std::vector<cplx>& x) {
  if (x.size() != f.nvars()) throw std::invalid_argument("point dimension mismatch");
  cplx sum = 0;
  for (const auto& [e, c] : f.terms()) {
    cplx m = to_double(c);
    for (size_t j = 0; j < e.size(); ++j) {
      if (e[j] < 0 && x[j] == cplx(0)) throw std::domain_error("division by zero at a negative exponent");
      if (e[j] != 0) m *= std::pow(x[j], e[j]);
    }
    sum += m;
  }
  return sum;
}

LaurentPolynomial partial(const LaurentPolynomial& f, size_t j) {
  if (j >= f.nvars()) throw std::out_of_range("variable index out of range");
  LaurentPolynomial r(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (e[j] == 0) continue;
    Exponent d(e);
    d[j] -= 1;
    r.add_term(d, c * e[j]);
  }
  return r;
}

LaurentPolynomial theta(const LaurentPolynomial& f, size_t j) {
  LaurentPolynomial r(f.nvars());
  for (const auto& [e, c] : f.terms()) r.add_term(e, c * e.at(j));
  return r;
}

// ---------------------------------------------------------------- kinematics

void KinematicPolynomial::add_term(const Exponent& e, const std::string& symbol, const Rational& c) {
  if (c == 0) return;
  auto& form = terms[e];
  form[symbol] += c;
  if (form[symbol] == 0) form.erase(symbol);
  if (form.empty()) terms.erase(e);
}

LaurentPolynomial KinematicPolynomial::substitute(const std::map<std::string, Rational>& values) const {
  LaurentPolynomial p(nvars);
  for (const auto& [e, form] : terms)
    for (const auto& [sym, c] : form) {
      auto it = values.find(sym);
      if (it == values.end()) throw std::invalid_argument("no value for symbol '" + sym + "'");
      p.add_term(e, c * it->second);
    }
  return p;
}

std::vector<std::string> KinematicPolynomial::symbols() const {
  std::set<std::string> all;
  for (const auto& [e, form] : terms)
    for (const auto& [sym, c] : form) all.insert(sym);
  return {all.begin(), all.end()};
}

std::string to_string(const KinematicPolynomial& f, const std::vector<std::string>& vars) {
  if (f.terms.empty()) return "0";
  std::string out;
  for (const auto& [e, form] : f.terms) {
    std::string mono = monomial_text(e, vars);
    std::string piece;
    bool negative = false;
    if (form.size() == 1 && abs(form.begin()->second) == 1) {
      negative = form.begin()->second < 0;
      piece = form.begin()->first;
    } else {
      std::string lin;
      for (const auto& [sym, c] : form) {
        std::string mag = abs(c) == 1 ? sym : to_string(abs(c)) + "*" + sym;
        if (lin.empty()) lin = (c < 0 ? "-" : "") + mag;
        else lin += (c < 0 ? " - " : " + ") + mag;
      }
      piece = "(" + lin + ")";
    }
    if (!mono.empty()) piece += "*" + mono;
    if (out.empty()) out = (negative ? "-" : "") + piece;
    else out += (negative ? " - " : " + ") + piece;
  }
  return out;
}

// ---------------------------------------------------------------- graphs

Graph graph_from_json(const json& j) {
  Graph g;
  g.vertices = j.at("vertices").get<int>();
  for (const auto& e : j.at("edges")) {
    int a = e.at(0).get<int>() - 1, b = e.at(1).get<int>() - 1;
    g.edges.emplace_back(a, b);
  }
  if (j.contains("legs"))
    for (const auto& l : j.at("legs")) g.legs.emplace_back(l.at(0).get<int>() - 1, l.at(1).get<std::string>());
  return g;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Atom naming the momentum invariant flowing between the two components of a
// spanning two-forest: the leg set on the side with fewer legs (ties go to the
// side holding the lowest-indexed leg).
std::string cut_symbol(const std::vector<std::string>& side) {
  if (side.size() == 1) return side.front();
  std::string name = "s[";
  for (size_t i = 0; i < side.size(); ++i) name += (i ? "," : "") + side[i];
  return name + "]";
}

}  // namespace

SymanzikPolynomials symanzik(const Graph& g) {
  const int V = g.vertices;
  const size_t E = g.edges.size();
  if (V < 1) throw std::invalid_argument("graph needs at least one vertex");
  if (E == 0 || E > 12) throw std::invalid_argument("symanzik supports 1..12 internal edges");
  for (auto [a, b] : g.edges)
    if (a < 0 || b < 0 || a >= V || b >= V) throw std::invalid_argument("edge endpoint out of range");
  for (const auto& [v, sym] : g.legs)
    if (v < 0 || v >= V) throw std::invalid_argument("leg vertex out of range");
  {
    UnionFind uf(V);
    int comps = V;
    for (auto [a, b] : g.edges)
      if (uf.unite(a, b)) --comps;
    if (comps != 1) throw std::invalid_argument("graph is disconnected");
  }

  SymanzikPolynomials out{LaurentPolynomial(E), KinematicPolynomial{E, {}}};
  for (unsigned mask = 0; mask < (1u << E); ++mask) {
    int k = __builtin_popcount(mask);
    if (k != V - 1 && k != V - 2) continue;
    UnionFind uf(V);
    bool forest = true;
    for (size_t e = 0; e < E && forest; ++e)
      if (mask & (1u << e)) forest = uf.unite(g.edges[e].first, g.edges[e].second);
    if (!forest) continue;
    Exponent mono(E, 0);
    for (size_t e = 0; e < E; ++e)
      if (!(mask & (1u << e))) mono[e] = 1;
    if (k == V - 1) {
      out.U.add_term(mono, 1);
      continue;
    }
    // two-forest: split legs by component
    int root0 = uf.find(0);
    std::vector<std::string> a, b;
    for (const auto& [v, sym] : g.legs) (uf.find(v) == root0 ? a : b).push_back(sym);
    if (a.empty() || b.empty()) continue;
    const std::vector<std::string>* side = &a;
    if (b.size() < a.size()) side = &b;
    else if (b.size() == a.size() && b.front() < a.front()) side = &b;
    out.F.add_term(mono, cut_symbol(*side), -1);
  }
  return out;
}

std::vector<LaurentPolynomial> moduli_minors(int m) {
  if (m < 4) throw std::invalid_argument("moduli_minors needs m >= 4");
  const size_t n = static_cast<size_t>(m - 3);
  // columns 1..m of the 2×m matrix; row1 = (1,…,1,0), row2 = (0,1,1+x1,…,1+x1+…+xn,1)
  std::vector<LaurentPolynomial> top, bottom;
  for (int c = 1; c <= m; ++c) {
    top.push_back(LaurentPolynomial::constant(n, c == m ? 0 : 1));
    LaurentPolynomial b(n);
    if (c == 2 || c == m) b = LaurentPolynomial::constant(n, 1);
    if (c >= 3 && c <= m - 1) {
      b = LaurentPolynomial::constant(n, 1);
      for (int k = 1; k <= c - 2; ++k) b += LaurentPolynomial::variable(n, static_cast<size_t>(k - 1));
    }
    bottom.push_back(b);
  }
  std::vector<LaurentPolynomial> out;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 2; j <= m - 1; ++j) {
      LaurentPolynomial f = top[i - 1] * bottom[j - 1] - top[j - 1] * bottom[i - 1];
      if (f.size() <= 1) continue;  // constants and lone monomials
      out.push_back(f);
    }
  return out;
}

}  // namespace euler
