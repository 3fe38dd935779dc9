#include "opdyn/grammar.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "opdyn/errors.hpp"
#include "opdyn/isometry.hpp"
#include "opdyn/probes.hpp"

namespace opdyn {

namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& s, std::size_t base = 0) : s_(s), base_(base) {}

  bool done() const { return i_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < s_.size() ? s_[i_ + ahead] : '\0'; }
  std::size_t pos() const { return base_ + i_; }
  std::string rest() const { return s_.substr(i_); }
  void skip(std::size_t n = 1) { i_ += n; }

  [[noreturn]] void fail(const std::string& msg) const { throw GrammarError(pos(), msg); }

  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'" + found());
  }
  bool accept_word(const std::string& w) {
    if (s_.compare(i_, w.size(), w) != 0) return false;
    i_ += w.size();
    return true;
  }
  void expect_end() {
    if (!done()) fail("unexpected trailing text '" + rest() + "'");
  }
  std::string found() const { return done() ? ", found end of input" : std::string(", found '") + peek() + "'"; }

  std::string ident() {
    const std::size_t start = i_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-' || peek() == '_')) ++i_;
    if (start == i_) fail("expected a name" + found());
    return s_.substr(start, i_ - start);
  }

  bool at_number(std::size_t ahead = 0) const {
    const char c = peek(ahead);
    const char d = peek(ahead + 1);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
    return (c == '-' || c == '+') && (std::isdigit(static_cast<unsigned char>(d)) || d == '.');
  }

  double number() {
    const std::size_t start = i_;
    if (peek() == '+' || peek() == '-') ++i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    if (peek() == '.') {
      ++i_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '-' || peek(1) == '+') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      i_ += 2;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    }
    const std::string tok = s_.substr(start, i_ - start);
    double v = 0.0;
    const auto* first = tok.data() + (tok[0] == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      i_ = start;
      fail("malformed number" + found());
    }
    return v;
  }

  std::int64_t integer() {
    const std::size_t start = i_;
    if (peek() == '-') ++i_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + i_, v);
    if (ec != std::errc() || ptr != s_.data() + i_ || start == i_) {
      i_ = start;
      fail("expected an integer" + found());
    }
    return v;
  }

  // real, real(+|-)imag i, imag i, i, cis(t)
  Complex scalar() {
    if (accept_word("cis(")) {
      const double t = number();
      expect(')');
      return std::polar(1.0, t);
    }
    if (peek() == 'i') {
      ++i_;
      return {0.0, 1.0};
    }
    if ((peek() == '+' || peek() == '-') && peek(1) == 'i') {
      const double sign = peek() == '-' ? -1.0 : 1.0;
      i_ += 2;
      return {0.0, sign};
    }
    const double a = number();
    if (accept('i')) return {0.0, a};
    if (peek() == '+' || peek() == '-') {
      const std::size_t save = i_;
      const double sign = peek() == '-' ? -1.0 : 1.0;
      if (peek(1) == 'i') {
        i_ += 2;
        return {a, sign};
      }
      if (at_number()) {
        const double b = number();
        if (accept('i')) return {a, b};
      }
      i_ = save;
    }
    return {a, 0.0};
  }

  std::vector<Complex> scalar_list() {
    expect('[');
    std::vector<Complex> out;
    if (accept(']')) return out;
    do out.push_back(scalar());
    while (accept(','));
    expect(']');
    return out;
  }

 private:
  const std::string& s_;
  std::size_t base_;
  std::size_t i_ = 0;
};

struct Param {
  std::size_t pos;
  std::vector<double> values;
  std::string word;
};

// key=value pairs separated by ',' or ';'. Keys in `lists` take comma
// separated number lists; keys in `words` take a bare word.
std::map<std::string, Param> parse_params(Cursor& c, const std::set<std::string>& numbers,
                                          const std::set<std::string>& lists, const std::set<std::string>& words) {
  std::map<std::string, Param> out;
  while (!c.done()) {
    const std::size_t at = c.pos();
    const std::string key = c.ident();
    if (!numbers.count(key) && !lists.count(key) && !words.count(key)) throw GrammarError(at, "unknown parameter '" + key + "'");
    if (out.count(key)) throw GrammarError(at, "duplicate parameter '" + key + "'");
    c.expect('=');
    Param p{c.pos(), {}, {}};
    if (words.count(key)) {
      p.word = c.ident();
    } else {
      p.values.push_back(c.number());
      while (lists.count(key) && c.peek() == ',' && c.at_number(1)) {
        c.skip();
        p.values.push_back(c.number());
      }
    }
    out.emplace(key, std::move(p));
    if (!c.accept(',') && !c.accept(';')) break;
  }
  return out;
}

double need(const std::map<std::string, Param>& ps, const std::string& key, std::size_t pos) {
  auto it = ps.find(key);
  if (it == ps.end()) throw GrammarError(pos, "missing parameter '" + key + "'");
  return it->second.values.front();
}

double get_or(const std::map<std::string, Param>& ps, const std::string& key, double dflt) {
  auto it = ps.find(key);
  return it == ps.end() ? dflt : it->second.values.front();
}

ParsedOperator from_entry(ZooEntry e) {
  ParsedOperator po;
  po.spec = e.spec;
  po.backward_rule = e.shift_rule;
  po.entry = std::move(e);
  return po;
}

ParsedOperator parse_op(Cursor& c);

ParsedOperator parse_kind(Cursor& c, const std::string& kind, std::size_t at) {
  ParsedOperator po;
  const auto wrap = [&](auto&& f) {
    try {
      return f();
    } catch (const GrammarError&) {
      throw;
    } catch (const std::exception& ex) {
      throw GrammarError(at, ex.what());
    }
  };
  if (kind == "bshift" || kind == "fshift") {
    const std::size_t ppos = c.pos();
    const auto ps = parse_params(c, {"alpha", "p"}, {}, {});
    const double alpha = need(ps, "alpha", ppos);
    if (ps.count("p")) po.p = ps.at("p").values.front();
    if (kind == "bshift") {
      WeightRule r = wrap([&] { return WeightRule::power_ratio(alpha, RatioForm::KOverKMinusOne); });
      po.spec = wrap([&] { return OperatorSpec::backward_shift(IndexUniverse::nat(), r); });
      po.backward_rule = r;
    } else {
      po.spec = wrap([&] {
        return OperatorSpec::forward_shift(IndexUniverse::nat(), WeightRule::power_ratio(alpha, RatioForm::KPlusOneOverK));
      });
    }
    return po;
  }
  if (kind == "polyshift") {
    const std::size_t ppos = c.pos();
    const auto ps = parse_params(c, {}, {"p"}, {"dir", "side"});
    auto it = ps.find("p");
    if (it == ps.end()) throw GrammarError(ppos, "missing parameter 'p'");
    Polynomial poly(it->second.values);
    bool backward = false, bilateral = false;
    if (auto d = ps.find("dir"); d != ps.end()) {
      if (d->second.word != "fwd" && d->second.word != "bwd") throw GrammarError(d->second.pos, "dir must be fwd or bwd");
      backward = d->second.word == "bwd";
    }
    if (auto s = ps.find("side"); s != ps.end()) {
      if (s->second.word != "uni" && s->second.word != "bi") throw GrammarError(s->second.pos, "side must be uni or bi");
      bilateral = s->second.word == "bi";
    }
    const IndexUniverse u = bilateral ? IndexUniverse::integers() : IndexUniverse::nat();
    po.spec = wrap([&] {
      return shift_from_polynomial(poly, backward ? ShiftDirection::Backward : ShiftDirection::Forward, u);
    });
    po.poly = poly;
    po.side = bilateral ? ShiftSide::Bilateral : ShiftSide::Unilateral;
    if (backward) po.backward_rule = std::get<ShiftNode>(po.spec.node().v).rule;
    return po;
  }
  if (kind == "matrix") {
    const std::size_t mpos = c.pos();
    c.expect('[');
    std::vector<std::vector<Complex>> rows;
    do rows.push_back(c.scalar_list());
    while (c.accept(','));
    c.expect(']');
    const std::size_t n = rows.size();
    for (const auto& r : rows)
      if (r.size() != n) throw GrammarError(mpos, "matrix must be square with equal row lengths");
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    po.spec = wrap([&] { return OperatorSpec::finite_matrix(std::move(m)); });
    return po;
  }
  if (kind == "diag") {
    const std::size_t dpos = c.pos();
    const auto d = c.scalar_list();
    if (d.empty()) throw GrammarError(dpos, "diagonal needs at least one entry");
    std::vector<std::pair<Index, Complex>> ov;
    for (std::size_t i = 0; i < d.size(); ++i) ov.emplace_back(static_cast<Index>(i + 1), d[i]);
    po.spec = wrap([&] {
      return OperatorSpec::diagonal(IndexUniverse::finite(static_cast<Index>(d.size())), ov, Complex(0.0, 0.0));
    });
    return po;
  }
  if (kind == "identity") {
    const auto ps = parse_params(c, {"n"}, {}, {});
    if (ps.count("n")) {
      const double n = ps.at("n").values.front();
      if (n < 1 || n != std::floor(n)) throw GrammarError(ps.at("n").pos, "n must be a positive integer");
      po.spec = OperatorSpec::identity(IndexUniverse::finite(static_cast<Index>(n)));
    } else {
      po.spec = OperatorSpec::identity(IndexUniverse::nat());
    }
    return po;
  }
  if (kind == "lblock") {
    const std::size_t ppos = c.pos();
    const auto ps = parse_params(c, {"theta"}, {}, {});
    const double t = need(ps, "theta", ppos);
    return wrap([&] { return from_entry(lambda_block(std::polar(1.0, t))); });
  }
  if (kind == "hyper") {
    const auto ps = parse_params(c, {"dim", "ell", "t1", "t2"}, {}, {});
    const int dim = static_cast<int>(get_or(ps, "dim", 4));
    const int ell = static_cast<int>(get_or(ps, "ell", 2));
    const double t1 = get_or(ps, "t1", 1.0), t2 = get_or(ps, "t2", std::sqrt(2.0));
    return wrap([&] { return from_entry(diag_nilpotent_3isometry(dim, ell, std::polar(1.0, t1), std::polar(1.0, t2))); });
  }
  if (kind == "blocktz") {
    ParsedOperator inner = parse_op(c);
    po.spec = wrap([&] { return OperatorSpec::block_tz(inner.spec); });
    return po;
  }
  throw GrammarError(at, "operator kind '" + kind + "' takes no parameters or is unknown");
}

ParsedOperator parse_op(Cursor& c) {
  const std::size_t at = c.pos();
  const std::string name = c.ident();
  if (c.accept(':')) return parse_kind(c, name, at);
  ParsedOperator po;
  if (name == "identity") return po;
  if (name == "bilateral") {
    po.spec = OperatorSpec::bilateral_shift(WeightRule::constant());
    return po;
  }
  std::string id = name;
  if (name == "twoiso") id = "two-isometry";
  if (auto e = zoo_lookup(id)) return from_entry(std::move(*e));
  throw GrammarError(at, "unknown operator '" + name + "'");
}

}  // namespace

ParsedOperator parse_operator(const std::string& text) {
  Cursor c(text);
  ParsedOperator po = parse_op(c);
  c.expect_end();
  po.text = text;
  return po;
}

SparseVec parse_vector(const std::string& text, const IndexUniverse& u, std::uint64_t seed, double p) {
  Cursor c(text);
  if (c.accept_word("dense:")) {
    const auto vals = c.scalar_list();
    c.expect_end();
    if (u.is_finite() && static_cast<Index>(vals.size()) > u.dimension())
      throw GrammarError(0, "dense vector longer than the space");
    std::vector<Entry> es;
    const Index first = u.first_index();
    for (std::size_t i = 0; i < vals.size(); ++i) es.push_back({{0, first + static_cast<Index>(i)}, vals[i]});
    return SparseVec::from_entries(u, std::move(es));
  }
  if (c.accept_word("random")) {
    std::uint64_t s = seed;
    if (c.accept(':')) {
      const std::size_t at = c.pos();
      try {
        s = parse_seed(c.rest());
      } catch (const std::exception&) {
        throw GrammarError(at, "malformed seed '" + c.rest() + "'");
      }
      c.skip(c.rest().size());
    }
    c.expect_end();
    Rng rng(s);
    return random_unit_vector(u, rng, 16, p);
  }
  if (c.accept_word("adv:")) {
    const std::size_t at = c.pos();
    const auto n = c.integer();
    c.expect_end();
    if (u.kind != UniverseKind::NatFromOne || u.blocks != 1) throw GrammarError(0, "adv vectors live on l^p(N)");
    try {
      return adversarial_vector(n, p);
    } catch (const std::exception& ex) {
      throw GrammarError(at, ex.what());
    }
  }
  std::vector<Entry> es;
  bool first_term = true;
  while (true) {
    double sign = 1.0;
    if (c.accept('-'))
      sign = -1.0;
    else if (!c.accept('+') && !first_term)
      c.fail("expected '+' or '-'" + c.found());
    first_term = false;
    Complex coef(1.0, 0.0);
    if (c.peek() != 'e') {
      if (c.accept('(')) {
        coef = c.scalar();
        c.expect(')');
      } else {
        coef = c.scalar();
      }
      c.expect('*');
    }
    const std::size_t at = c.pos();
    c.expect('e');
    const Index pos = c.integer();
    int block = 0;
    if (c.accept('@')) block = static_cast<int>(c.integer());
    if (!u.contains(Key{block, pos})) throw GrammarError(at, "basis index outside the space");
    es.push_back({{block, pos}, sign * coef});
    if (c.done()) break;
  }
  return SparseVec::from_entries(u, std::move(es));
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  const char* b = text.data() + (hex ? 2 : 0);
  const char* e = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v, hex ? 16 : 10);
  if (ec != std::errc() || ptr != e || b == e) throw ParameterError("malformed seed '" + text + "'");
  return v;
}

Index parse_count(const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParameterError("malformed count '" + text + "'");
  if (!(v >= 0.0) || v != std::floor(v) || v > 9e15) throw ParameterError("count must be a nonnegative integer: " + text);
  return static_cast<Index>(v);
}

}  // namespace opdyn
