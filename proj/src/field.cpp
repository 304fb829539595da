#include "cubic/field.hpp"

#include "cubic/numtheory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace cubic {
namespace {

constexpr std::int64_t kMaxCoefficient = 1'000'000'000;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t reduce_mod(std::int64_t c, std::uint64_t p) {
  const std::int64_t sp = static_cast<std::int64_t>(p);
  std::int64_t r = c % sp;
  if (r < 0) r += sp;
  return static_cast<std::uint64_t>(r);
}

// Arithmetic in F_p[x]/(f) for monic cubic f.
class CubicResidueRing {
 public:
  CubicResidueRing(const CubicPoly& f, std::uint64_t p)
      : p_(p), small_(p < (1ULL << 32)), f0_(reduce_mod(f.c0, p)), f1_(reduce_mod(f.c1, p)), f2_(reduce_mod(f.c2, p)) {}

  using Elem = std::array<std::uint64_t, 3>;

  [[nodiscard]] std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return small_ ? a * b % p_ : mulmod(a, b, p_);
  }
  [[nodiscard]] std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  [[nodiscard]] std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }

  [[nodiscard]] Elem mul(const Elem& a, const Elem& b) const {
    std::array<std::uint64_t, 5> prod{};
    for (int i = 0; i < 3; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < 3; ++j) prod[i + j] = add(prod[i + j], mul(a[i], b[j]));
    }
    for (int k = 4; k >= 3; --k) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      prod[k - 1] = sub(prod[k - 1], mul(c, f2_));
      prod[k - 2] = sub(prod[k - 2], mul(c, f1_));
      prod[k - 3] = sub(prod[k - 3], mul(c, f0_));
    }
    return {prod[0], prod[1], prod[2]};
  }

  /// x^e mod f.
  [[nodiscard]] Elem x_power(std::uint64_t e) const {
    Elem result{1 % p_, 0, 0};
    Elem base{0, 1 % p_, 0};
    while (e > 0) {
      if (e & 1U) result = mul(result, base);
      base = mul(base, base);
      e >>= 1U;
    }
    return result;
  }

  [[nodiscard]] std::vector<std::uint64_t> modulus() const { return {f0_, f1_, f2_, 1 % p_}; }
  [[nodiscard]] std::uint64_t prime() const { return p_; }

 private:
  std::uint64_t p_;
  bool small_;
  std::uint64_t f0_, f1_, f2_;
};

void trim_poly(std::vector<std::uint64_t>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Degree of gcd(a, b) over F_p; a must be nonzero.
int gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, const CubicResidueRing& ring) {
  const std::uint64_t p = ring.prime();
  trim_poly(a);
  trim_poly(b);
  while (!b.empty()) {
    const std::uint64_t inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      const std::uint64_t c = ring.mul(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ring.sub(a[shift + i], ring.mul(c, b[i]));
      trim_poly(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

BigInt isqrt_exact(const BigInt& n, bool& exact) {
  BigInt r = boost::multiprecision::sqrt(n);
  exact = (r * r == n);
  return r;
}

// |D| = d' * f^2 with d' squarefree; trial division to 10^6 then the cofactor
// (at most two large prime factors when below 10^18) is resolved by a square test.
void squarefree_split(const BigInt& D, BigInt& d, BigInt& f) {
  BigInt n = abs(D);
  d = 1;
  f = 1;
  for (std::uint64_t p = 2; p <= 1'000'000 && BigInt(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (unsigned i = 0; i < e / 2; ++i) f *= p;
    if (e % 2 == 1) d *= p;
  }
  if (n > 1) {
    if (n > BigInt(1'000'000'000'000'000'000ULL)) {
      throw ConfigError("discriminant cofactor too large to factor: " + n.str());
    }
    bool exact = false;
    const BigInt r = isqrt_exact(n, exact);
    if (exact) {
      f *= r;
    } else {
      d *= n;
    }
  }
  if (D < 0) d = -d;
}

bool has_integer_root(const CubicPoly& poly) {
  if (poly.c0 == 0) return true;
  const auto eval = [&](std::int64_t r) {
    const i128 x = r;
    return x * x * x + poly.c2 * x * x + poly.c1 * x + poly.c0;
  };
  const std::uint64_t a = static_cast<std::uint64_t>(poly.c0 < 0 ? -poly.c0 : poly.c0);
  for (std::uint64_t d = 1; d * d <= a; ++d) {
    if (a % d != 0) continue;
    for (std::uint64_t cand : {d, a / d}) {
      const auto r = static_cast<std::int64_t>(cand);
      if (eval(r) == 0 || eval(-r) == 0) return true;
    }
  }
  return false;
}

std::int64_t parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("field config: bad integer for '" + key + "': " + s);
}

}  // namespace

SplittingType::SplittingType(std::vector<PrimeComponent> components, unsigned degree)
    : components_(std::move(components)) {
  if (components_.empty() || components_.size() > 3) {
    throw ConfigError("splitting type must have between 1 and 3 components");
  }
  unsigned total = 0;
  for (const auto& c : components_) {
    if (c.residue_degree == 0 || c.ramification == 0) throw ConfigError("splitting type: zero degree or index");
    total += c.residue_degree * c.ramification;
  }
  if (total != degree) {
    throw ConfigError("splitting type: sum of e*f is " + std::to_string(total) + ", expected " + std::to_string(degree));
  }
  std::sort(components_.begin(), components_.end(), [](const PrimeComponent& a, const PrimeComponent& b) {
    if (a.residue_degree != b.residue_degree) return a.residue_degree < b.residue_degree;
    return a.ramification > b.ramification;
  });
}

SplittingType SplittingType::parse(std::string_view text, unsigned degree) {
  std::vector<PrimeComponent> comps;
  std::size_t i = 0;
  const std::string s = trim(text);
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '*') {
      ++i;
      continue;
    }
    if (s[i] != '(') throw ConfigError("splitting type: expected '(' in '" + s + "'");
    const std::size_t close = s.find(')', i);
    if (close == std::string::npos) throw ConfigError("splitting type: missing ')' in '" + s + "'");
    const std::string inner = s.substr(i + 1, close - i - 1);
    const std::size_t comma = inner.find(',');
    if (comma == std::string::npos) throw ConfigError("splitting type: expected (f,e) in '" + s + "'");
    const auto f = parse_int(inner.substr(0, comma), "f");
    const auto e = parse_int(inner.substr(comma + 1), "e");
    if (f <= 0 || e <= 0) throw ConfigError("splitting type: f and e must be positive");
    comps.push_back({static_cast<unsigned>(f), static_cast<unsigned>(e)});
    i = close + 1;
  }
  return SplittingType(std::move(comps), degree);
}

unsigned SplittingType::degree_one_count() const noexcept {
  return static_cast<unsigned>(std::count_if(components_.begin(), components_.end(),
                                             [](const PrimeComponent& c) { return c.residue_degree == 1; }));
}

bool SplittingType::ramified() const noexcept {
  return std::any_of(components_.begin(), components_.end(), [](const PrimeComponent& c) { return c.ramification > 1; });
}

std::string SplittingType::name() const {
  std::string out;
  std::map<unsigned, unsigned> seen;
  for (const auto& c : components_) {
    if (!out.empty()) out += "*";
    out += "P" + std::to_string(c.residue_degree);
    out += std::string(seen[c.residue_degree]++, '\'');
    if (c.ramification > 1) out += "^" + std::to_string(c.ramification);
  }
  return out;
}

std::string SplittingType::encoded() const {
  std::string out;
  for (const auto& c : components_) {
    out += "(" + std::to_string(c.residue_degree) + "," + std::to_string(c.ramification) + ")";
  }
  return out;
}

BigInt CubicPoly::discriminant() const {
  const BigInt b = c2;
  const BigInt c = c1;
  const BigInt d = c0;
  return b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
}

std::uint64_t CubicPoly::discriminant_mod(std::uint64_t p) const {
  const std::uint64_t b = reduce_mod(c2, p);
  const std::uint64_t c = reduce_mod(c1, p);
  const std::uint64_t d = reduce_mod(c0, p);
  auto m = [p](std::uint64_t x, std::uint64_t y) { return mulmod(x, y, p); };
  const std::uint64_t k4 = 4 % p;
  const std::uint64_t k27 = 27 % p;
  const std::uint64_t k18 = 18 % p;
  const std::uint64_t pos = (m(m(b, b), m(c, c)) + m(k18, m(m(b, c), d))) % p;
  const std::uint64_t neg = (m(k4, m(m(c, c), c)) + m(k4, m(m(m(b, b), b), d)) + m(k27, m(d, d))) % p;
  return (pos + p - neg) % p;
}

std::uint64_t CubicPoly::eval_mod(std::uint64_t x, std::uint64_t p) const {
  x %= p;
  std::uint64_t v = 1 % p;
  v = (mulmod(v, x, p) + reduce_mod(c2, p)) % p;
  v = (mulmod(v, x, p) + reduce_mod(c1, p)) % p;
  v = (mulmod(v, x, p) + reduce_mod(c0, p)) % p;
  return v;
}

std::string CubicPoly::to_string() const {
  std::ostringstream os;
  os << "x^3";
  auto term = [&](std::int64_t c, const char* mono) {
    if (c == 0) return;
    os << (c < 0 ? " - " : " + ");
    const std::int64_t a = c < 0 ? -c : c;
    if (a != 1 || *mono == '\0') os << a;
    os << mono;
  };
  term(c2, "x^2");
  term(c1, "x");
  term(c0, "");
  return os.str();
}

double FieldSpec::abs_disc() const { return static_cast<double>(abs(disc)); }

bool FieldSpec::totally_real() const { return disc > 0; }

FieldSpec make_field(std::string name, CubicPoly poly, const BigInt* disc,
                     std::map<std::uint64_t, SplittingType> overrides) {
  for (std::int64_t c : {poly.c0, poly.c1, poly.c2}) {
    if (c > kMaxCoefficient || c < -kMaxCoefficient) {
      throw ConfigError("polynomial coefficient exceeds 10^9 in magnitude");
    }
  }
  if (has_integer_root(poly)) throw ConfigError("reducible polynomial " + poly.to_string() + " (has an integer root)");
  FieldSpec field;
  field.name = std::move(name);
  field.poly = poly;
  const BigInt poly_disc = poly.discriminant();
  if (poly_disc == 0) throw ConfigError("discriminant is zero");
  if (disc != nullptr) {
    if (*disc == 0) throw ConfigError("discriminant is zero");
    if ((*disc < 0) != (poly_disc < 0) || poly_disc % *disc != 0) {
      throw ConfigError("field discriminant " + disc->str() + " is incompatible with polynomial discriminant " +
                        poly_disc.str());
    }
    bool exact = false;
    field.index = isqrt_exact(poly_disc / *disc, exact);
    if (!exact) throw ConfigError("polynomial discriminant / field discriminant is not a square");
    field.disc = *disc;
  } else {
    field.disc = poly_disc;
    field.index = 1;
  }
  for (const auto& [p, split] : overrides) {
    if (!is_prime(p)) throw ConfigError("override key " + std::to_string(p) + " is not prime");
    (void)split;
  }
  if (field.index > 1) {
    if (field.index > BigInt(std::numeric_limits<std::uint64_t>::max())) throw ConfigError("index too large");
    for (const auto& [p, e] : factorize(static_cast<std::uint64_t>(field.index))) {
      (void)e;
      if (!overrides.contains(p)) {
        throw ConfigError("missing splitting override for index-divisor prime " + std::to_string(p));
      }
    }
  }
  field.index_divisor_overrides = std::move(overrides);
  squarefree_split(field.disc, field.disc_sqfree_part, field.conductor_f);
  field.normal = (field.disc_sqfree_part == 1);
  return field;
}

FieldSpec parse_field_spec(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<FieldSpec> base;
  std::string name = "custom";
  std::optional<std::int64_t> c0, c1, c2;
  std::optional<BigInt> disc;
  std::map<std::uint64_t, SplittingType> overrides;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("field config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") {
      name = value;
    } else if (key == "preset") {
      base = preset_field(value);
      name = base->name;
    } else if (key == "poly") {
      std::vector<std::int64_t> cs;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cs.push_back(parse_int(trim(item), key));
      if (cs.size() != 3) throw ConfigError("poly expects three coefficients c0,c1,c2");
      c0 = cs[0];
      c1 = cs[1];
      c2 = cs[2];
    } else if (key == "c0") {
      c0 = parse_int(value, key);
    } else if (key == "c1") {
      c1 = parse_int(value, key);
    } else if (key == "c2") {
      c2 = parse_int(value, key);
    } else if (key == "disc") {
      try {
        disc = BigInt(value);
      } catch (const std::exception&) {
        throw ConfigError("bad discriminant: " + value);
      }
    } else if (key.rfind("override.", 0) == 0) {
      const auto p = parse_int(key.substr(9), key);
      if (p < 2) throw ConfigError("override prime must be >= 2");
      overrides.insert_or_assign(static_cast<std::uint64_t>(p), SplittingType::parse(value));
    } else {
      throw ConfigError("field config: unknown key '" + key + "'");
    }
  }
  if (base && !c0 && !c1 && !c2 && !disc && overrides.empty()) {
    base->name = name;
    return *base;
  }
  CubicPoly poly = base ? base->poly : CubicPoly{};
  if (!base && !(c0 && c1 && c2)) throw ConfigError("field config must supply poly (c0,c1,c2) or a preset");
  if (c0) poly.c0 = *c0;
  if (c1) poly.c1 = *c1;
  if (c2) poly.c2 = *c2;
  return make_field(name, poly, disc ? &*disc : nullptr, std::move(overrides));
}

std::vector<std::string> preset_names() { return {"cubic-nonnormal-2", "cubic-cyclic-7", "rationals"}; }

FieldSpec preset_field(std::string_view name) {
  if (name == "cubic-nonnormal-2") return make_field("cubic-nonnormal-2", CubicPoly{-2, 0, 0});
  if (name == "cubic-cyclic-7") return make_field("cubic-cyclic-7", CubicPoly{-1, -2, 1});
  if (name == "rationals") {
    FieldSpec q;
    q.name = "rationals";
    q.degree = 1;
    q.disc = 1;
    q.disc_sqfree_part = 1;
    q.conductor_f = 1;
    q.normal = true;
    return q;
  }
  throw ConfigError("unknown field preset '" + std::string(name) + "'");
}

FieldSpec load_field(std::string_view name_or_path) {
  for (const auto& preset : preset_names()) {
    if (preset == name_or_path) return preset_field(name_or_path);
  }
  std::ifstream in{std::string(name_or_path)};
  if (!in) throw ConfigError("unknown field preset or unreadable config: " + std::string(name_or_path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_field_spec(buf.str());
}

unsigned count_roots_mod_p(const CubicPoly& poly, std::uint64_t p) {
  const CubicResidueRing ring(poly, p);
  auto g = ring.x_power(p);
  g[1] = ring.sub(g[1], 1 % p);
  if (g[0] == 0 && g[1] == 0 && g[2] == 0) return 3;
  return static_cast<unsigned>(gcd_degree(ring.modulus(), {g[0], g[1], g[2]}, ring));
}

SplittingType splitting_type(const FieldSpec& field, std::uint64_t p) {
  if (!is_prime(p)) throw PreconditionError("splitting_type: " + std::to_string(p) + " is not prime");
  if (field.is_rationals()) return SplittingType({{1, 1}}, 1);
  if (const auto it = field.index_divisor_overrides.find(p); it != field.index_divisor_overrides.end()) {
    return it->second;
  }
  if (field.index > 1 && field.index % p == 0) {
    throw ConfigError("missing splitting override for index-divisor prime " + std::to_string(p));
  }
  const unsigned roots = count_roots_mod_p(field.poly, p);
  if (field.poly.discriminant_mod(p) != 0) {
    switch (roots) {
      case 3: return SplittingType({{1, 1}, {1, 1}, {1, 1}});
      case 1: return SplittingType({{1, 1}, {2, 1}});
      case 0: return SplittingType({{3, 1}});
      default: break;
    }
    throw std::logic_error("squarefree cubic with two roots mod " + std::to_string(p));
  }
  // A repeated factor of a cubic over F_p is linear, so every factor is linear.
  switch (roots) {
    case 2: return SplittingType({{1, 2}, {1, 1}});
    case 1: return SplittingType({{1, 3}});
    default: break;
  }
  throw std::logic_error("inseparable cubic with " + std::to_string(roots) + " roots mod " + std::to_string(p));
}

unsigned degree_one_primes(const FieldSpec& field, std::uint64_t p) {
  if (field.is_rationals()) return 1;
  if (!field.index_divisor_overrides.empty()) {
    if (const auto it = field.index_divisor_overrides.find(p); it != field.index_divisor_overrides.end()) {
      return it->second.degree_one_count();
    }
  }
  return count_roots_mod_p(field.poly, p);
}

std::vector<std::int64_t> local_aK(const SplittingType& split, unsigned kmax) {
  std::vector<std::int64_t> coef(kmax + 1, 0);
  coef[0] = 1;
  for (const auto& c : split.components()) {
    for (unsigned k = c.residue_degree; k <= kmax; ++k) coef[k] += coef[k - c.residue_degree];
  }
  return coef;
}

std::vector<std::int64_t> local_aK(const FieldSpec& field, std::uint64_t p, unsigned kmax) {
  return local_aK(splitting_type(field, p), kmax);
}

std::vector<std::int64_t> local_muK(const std::vector<std::int64_t>& local_a) {
  std::vector<std::int64_t> mu(local_a.size(), 0);
  if (mu.empty()) return mu;
  mu[0] = 1;
  for (std::size_t k = 1; k < mu.size(); ++k) {
    std::int64_t s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += local_a[j] * mu[k - j];
    mu[k] = -s;
  }
  return mu;
}

}  // namespace cubic
