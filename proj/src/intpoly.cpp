#include "polyblock/intpoly.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "polyblock/arith.hpp"
#include "polyblock/error.hpp"

namespace polyblock {

namespace {

using Coeffs = std::vector<mpz_class>;

void trim(Coeffs& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

int deg(const Coeffs& v) { return static_cast<int>(v.size()) - 1; }

mpz_class pow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

mpz_class content_of(const Coeffs& v) {
  mpz_class g = 0;
  for (const auto& c : v) g = gcd(g, c);
  return g;
}

void divexact(Coeffs& v, const mpz_class& d) {
  for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
}

// lc(b)^(deg a - deg b + 1) * a  mod  b, fraction-free.
Coeffs pseudo_remainder(Coeffs a, const Coeffs& b) {
  const int db = deg(b);
  const mpz_class& lb = b.back();
  int steps = deg(a) - db + 1;
  while (deg(a) >= db) {
    mpz_class la = a.back();
    const int shift = deg(a) - db;
    for (auto& c : a) c *= lb;
    for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + shift)] -= la * b[static_cast<std::size_t>(i)];
    a.pop_back();
    trim(a);
    --steps;
    if (a.empty()) break;
  }
  if (steps > 0 && !a.empty()) {
    mpz_class scale = pow(lb, static_cast<unsigned long>(steps));
    for (auto& c : a) c *= scale;
  }
  return a;
}

}  // namespace

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) {
    throw Error(ErrorCode::InvalidPolynomial, "polynomial must have degree at least 1");
  }
  if (coeffs_.back() == 0) {
    throw Error(ErrorCode::InvalidPolynomial, "leading (last) coefficient must be nonzero");
  }
}

IntPoly::IntPoly(std::initializer_list<long> coeffs)
    : IntPoly(std::vector<mpz_class>(coeffs.begin(), coeffs.end())) {}

IntPoly IntPoly::parse(std::string_view text) {
  std::vector<mpz_class> coeffs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string token(text.substr(pos, comma - pos));
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                token.end());
    if (!token.empty() && token[0] == '+') token.erase(0, 1);
    mpz_class value;
    if (token.empty() || value.set_str(token, 10) != 0) {
      throw Error(ErrorCode::InvalidPolynomial, "bad coefficient '" + token + "' in '" + std::string(text) + "'");
    }
    coeffs.push_back(value);
    pos = comma + 1;
  }
  return IntPoly(std::move(coeffs));
}

mpz_class IntPoly::operator()(const mpz_class& x) const {
  mpz_class acc = coeffs_.back();
  for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

unsigned long long IntPoly::eval_mod(unsigned long long x, unsigned long long m) const {
  u64 acc = 0;
  x %= m;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = addmod(mulmod(acc, x, m), mod_u64(*it, m), m);
  }
  return acc;
}

IntPoly IntPoly::derivative() const {
  std::vector<mpz_class> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[static_cast<std::size_t>(i)] * i);
  if (d.size() < 2) throw Error(ErrorCode::InvalidPolynomial, "derivative of a linear polynomial is constant");
  return IntPoly(std::move(d));
}

IntPoly IntPoly::shifted(const mpz_class& t) const {
  // Taylor shift by repeated synthetic division.
  std::vector<mpz_class> c = coeffs_;
  const int n = degree();
  for (int i = 0; i < n; ++i) {
    for (int j = n - 1; j >= i; --j) c[static_cast<std::size_t>(j)] += t * c[static_cast<std::size_t>(j + 1)];
  }
  return IntPoly(std::move(c));
}

mpz_class IntPoly::content() const { return content_of(coeffs_); }

IntPoly IntPoly::primitive_part() const {
  std::vector<mpz_class> c = coeffs_;
  divexact(c, content());
  if (c.back() < 0) {
    for (auto& x : c) x = -x;
  }
  return IntPoly(std::move(c));
}

std::string IntPoly::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ',';
    out += coeffs_[i].get_str();
  }
  return out;
}

mpz_class resultant(std::span<const mpz_class> f, std::span<const mpz_class> g) {
  Coeffs a(f.begin(), f.end());
  Coeffs b(g.begin(), g.end());
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;

  const mpz_class ca = content_of(a);
  const mpz_class cb = content_of(b);
  divexact(a, ca);
  divexact(b, cb);
  const mpz_class t = pow(ca, static_cast<unsigned long>(deg(b))) * pow(cb, static_cast<unsigned long>(deg(a)));
  int s = 1;
  if (deg(a) < deg(b)) {
    std::swap(a, b);
    if (deg(a) % 2 && deg(b) % 2) s = -1;
  }
  if (deg(b) == 0) return s * t * pow(b[0], static_cast<unsigned long>(deg(a)));

  mpz_class g_acc = 1, h = 1;
  while (true) {
    const int delta = deg(a) - deg(b);
    if (deg(a) % 2 && deg(b) % 2) s = -s;
    Coeffs r = pseudo_remainder(a, b);
    a = std::move(b);
    b = std::move(r);
    if (b.empty()) return 0;
    divexact(b, g_acc * pow(h, static_cast<unsigned long>(delta)));
    g_acc = a.back();
    if (delta == 1) {
      h = g_acc;
    } else if (delta > 1) {
      h = pow(g_acc, static_cast<unsigned long>(delta)) / pow(h, static_cast<unsigned long>(delta - 1));
    }
    if (deg(b) > 0) continue;
    const int da = deg(a);
    h = pow(b[0], static_cast<unsigned long>(da)) / pow(h, static_cast<unsigned long>(da - 1));
    return s * t * h;
  }
}

mpz_class resultant(const IntPoly& f, const IntPoly& g) { return resultant(f.coeffs(), g.coeffs()); }

mpz_class discriminant(const IntPoly& f) {
  const int k = f.degree();
  if (k == 1) return 1;
  mpz_class res = resultant(f, f.derivative());
  mpz_class d;
  mpz_divexact(d.get_mpz_t(), res.get_mpz_t(), f.leading().get_mpz_t());
  if ((k * (k - 1) / 2) % 2) d = -d;
  return d;
}

std::vector<mpz_class> shift_resultant(const IntPoly& f) {
  const int k = f.degree();
  const int points = k * k + 1;
  // Forward differences of R at Y = 0, 1, ..., k^2.
  std::vector<mpz_class> diff;
  diff.reserve(static_cast<std::size_t>(points));
  for (int y = 0; y < points; ++y) diff.push_back(resultant(f, f.shifted(y)));
  std::vector<mpz_class> leading_diffs;
  for (int j = 0; j < points; ++j) {
    leading_diffs.push_back(diff[0]);
    for (int i = 0; i + 1 < static_cast<int>(diff.size()); ++i) diff[static_cast<std::size_t>(i)] = diff[static_cast<std::size_t>(i + 1)] - diff[static_cast<std::size_t>(i)];
    diff.pop_back();
  }
  // Newton form sum_j D^j R(0) / j! * Y(Y-1)...(Y-j+1), expanded.
  std::vector<mpq_class> result(static_cast<std::size_t>(points), 0);
  std::vector<mpz_class> falling{1};  // Y(Y-1)...(Y-j+1)
  mpz_class factorial = 1;
  for (int j = 0; j < points; ++j) {
    if (j > 0) {
      factorial *= j;
      std::vector<mpz_class> next(falling.size() + 1, 0);
      for (std::size_t i = 0; i < falling.size(); ++i) {
        next[i + 1] += falling[i];
        next[i] -= falling[i] * (j - 1);
      }
      falling = std::move(next);
    }
    mpq_class scale(leading_diffs[static_cast<std::size_t>(j)], factorial);
    scale.canonicalize();
    for (std::size_t i = 0; i < falling.size(); ++i) result[i] += scale * falling[i];
  }
  std::vector<mpz_class> out;
  for (auto& c : result) {
    c.canonicalize();
    if (c.get_den() != 1) throw Error(ErrorCode::LemmaViolation, "shift resultant interpolation is not integral");
    out.push_back(c.get_num());
  }
  trim(out);
  return out;
}

CompanionPoly companion(const IntPoly& f) {
  const int k = f.degree();
  if (k < 2) throw Error(ErrorCode::CompanionUndefined, "companion polynomial needs degree >= 2");
  std::vector<mpz_class> r = shift_resultant(f);
  const mpz_class lead_sq = f.leading() * f.leading();
  std::vector<mpz_class> tilde;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (static_cast<int>(i) < k) {
      if (r[i] != 0) throw Error(ErrorCode::LemmaViolation, "shift resultant not divisible by Y^k");
      continue;
    }
    if (!mpz_divisible_p(r[i].get_mpz_t(), lead_sq.get_mpz_t())) {
      throw Error(ErrorCode::LemmaViolation, "shift resultant not divisible by a_k^2");
    }
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), r[i].get_mpz_t(), lead_sq.get_mpz_t());
    tilde.push_back(q);
  }
  if (static_cast<int>(tilde.size()) != k * (k - 1) + 1) {
    throw Error(ErrorCode::LemmaViolation, "companion polynomial has unexpected degree");
  }
  return CompanionPoly{IntPoly(std::move(tilde)), f, k == 2 || k == 3};
}

IntPoly companion_closed_form(const IntPoly& f) {
  const mpz_class disc = discriminant(f);
  if (f.degree() == 2) {
    const mpz_class& a2 = f.coeff(2);
    return IntPoly(std::vector<mpz_class>{-disc, 0, a2 * a2});
  }
  if (f.degree() == 3) {
    const mpz_class &a1 = f.coeff(1), &a2 = f.coeff(2), &a3 = f.coeff(3);
    // (A X^2 + B)^2 X^2 - D = A^2 X^6 + 2AB X^4 + B^2 X^2 - D
    const mpz_class A = a3 * a3;
    const mpz_class B = 3 * a1 * a3 - a2 * a2;
    return IntPoly(std::vector<mpz_class>{-disc, 0, B * B, 0, 2 * A * B, 0, A * A});
  }
  throw Error(ErrorCode::PreconditionFailed, "closed form exists only for degree 2 and 3");
}

std::string_view to_string(GaloisGroup g) {
  switch (g) {
    case GaloisGroup::S2: return "S2";
    case GaloisGroup::S3: return "S3";
    case GaloisGroup::A3: return "A3";
    case GaloisGroup::NotApplicable: return "NotApplicable";
  }
  return "NotApplicable";
}

namespace {

std::vector<mpz_class> divisors(const mpz_class& n) {
  FactorResult fr = factor(n, 256);
  if (!fr.complete()) throw Error(ErrorCode::Unsupported, "coefficient too large to enumerate divisors");
  std::vector<mpz_class> divs{1};
  for (const auto& [p, e] : fr.factors) {
    const std::size_t base = divs.size();
    mpz_class pk = 1;
    for (unsigned i = 0; i < e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

bool has_rational_root(const IntPoly& f) {
  if (f.coeff(0) == 0) return true;
  const int k = f.degree();
  const auto numerators = divisors(f.coeff(0));
  const auto denominators = divisors(f.leading());
  for (const auto& q : denominators) {
    for (const auto& p0 : numerators) {
      if (gcd(p0, q) != 1) continue;
      for (int sign : {1, -1}) {
        const mpz_class p = sign * p0;
        // q^k f(p/q) = sum a_i p^i q^(k-i)
        mpz_class acc = 0;
        for (int i = 0; i <= k; ++i) {
          acc += f.coeff(i) * pow(p, static_cast<unsigned long>(i)) * pow(q, static_cast<unsigned long>(k - i));
        }
        if (acc == 0) return true;
      }
    }
  }
  return false;
}

}  // namespace

GaloisReport classify(const IntPoly& f) {
  const int k = f.degree();
  if (k != 2 && k != 3) throw Error(ErrorCode::PreconditionFailed, "classify supports degree 2 and 3 only");
  GaloisReport report{false, GaloisGroup::NotApplicable, 1, discriminant(f), f.content()};
  const IntPoly pp = f.primitive_part();
  if (has_rational_root(pp)) {
    report.reducible = true;
    return report;
  }
  if (k == 2) {
    report.group = GaloisGroup::S2;
    report.delta = mpq_class(1, 2);
  } else if (report.discriminant > 0 && mpz_perfect_square_p(report.discriminant.get_mpz_t())) {
    report.group = GaloisGroup::A3;
    report.delta = mpq_class(1, 3);
  } else {
    report.group = GaloisGroup::S3;
    report.delta = mpq_class(2, 3);
  }
  return report;
}

mpq_class prime_density(const IntPoly& f) {
  if (f.degree() == 1) return 1;
  if (f.degree() == 2 || f.degree() == 3) return classify(f).delta;
  throw Error(ErrorCode::Unsupported, "prime density known only for degree <= 3");
}

}  // namespace polyblock
