#include "etale/algebra.hpp"

#include <sstream>

#include "etale/error.hpp"

namespace etale {

namespace {

bool same_groupoid(const GroupoidPtr& a, const GroupoidPtr& b) {
  return a == b || *a == *b;
}

void require_compatible(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
  if (!same_groupoid(a.groupoid_ptr(), b.groupoid_ptr())) {
    throw InvalidArgument(std::string(op) + ": elements live over different groupoids");
  }
  if (!(a.ring() == b.ring())) {
    throw RingMismatch(std::string(op) + ": " + a.ring().name() + " vs " + b.ring().name());
  }
}

}  // namespace

AlgebraElement::AlgebraElement(GroupoidPtr groupoid, Ring ring)
    : groupoid_(std::move(groupoid)), ring_(ring) {
  if (!groupoid_) throw InvalidArgument("AlgebraElement: null groupoid");
}

AlgebraElement AlgebraElement::from_coefficients(GroupoidPtr groupoid, Ring ring,
                                                 const std::map<Arrow, Scalar>& coeffs) {
  AlgebraElement f(std::move(groupoid), ring);
  for (const auto& [g, c] : coeffs) f.add_term(g, c);
  return f;
}

Scalar AlgebraElement::coefficient(Arrow g) const {
  auto it = coeffs_.find(g);
  return it == coeffs_.end() ? Scalar(0) : it->second;
}

std::vector<Arrow> AlgebraElement::support() const {
  std::vector<Arrow> out;
  for (const auto& [g, c] : coeffs_) out.push_back(g);
  return out;
}

void AlgebraElement::add_term(Arrow g, const Scalar& c) {
  if (index(g) >= groupoid_->num_arrows()) {
    throw InvalidArgument("arrow index " + std::to_string(index(g)) + " out of range");
  }
  Scalar value = ring_.add(coefficient(g), ring_.element(c));
  if (value == 0) {
    coeffs_.erase(g);
  } else {
    coeffs_[g] = value;
  }
}

std::string AlgebraElement::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string s;
  for (const auto& [g, c] : coeffs_) {
    if (!s.empty()) s += " + ";
    if (c != 1) s += c.get_str() + "*";
    s += groupoid_->name(g);
  }
  return s;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  return same_groupoid(a.groupoid_, b.groupoid_) && a.ring_ == b.ring_ &&
         a.coeffs_ == b.coeffs_;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_compatible(a, b, "add");
  AlgebraElement out = a;
  for (const auto& [g, c] : b.coefficients()) out.add_term(g, c);
  return out;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  require_compatible(a, b, "sub");
  AlgebraElement out = a;
  for (const auto& [g, c] : b.coefficients()) out.add_term(g, a.ring().neg(c));
  return out;
}

AlgebraElement scale(const Scalar& c, const AlgebraElement& f) {
  AlgebraElement out(f.groupoid_ptr(), f.ring());
  for (const auto& [g, v] : f.coefficients()) out.add_term(g, f.ring().mul(f.ring().element(c), v));
  return out;
}

AlgebraElement char_fn(const GroupoidPtr& g, const Bisection& u, const Ring& ring) {
  AlgebraElement f(g, ring);
  for (Arrow a : u.arrows()) f.add_term(a, ring.one());
  return f;
}

AlgebraElement char_fn(const GroupoidPtr& g, const CompactOpen& u, const Ring& ring) {
  return char_fn(g, Bisection::units(*g, u), ring);
}

AlgebraElement singleton(const GroupoidPtr& g, Arrow a, const Ring& ring) {
  return char_fn(g, Bisection::singleton(*g, a), ring);
}

AlgebraElement convolve(const AlgebraElement& f1, const AlgebraElement& f2) {
  require_compatible(f1, f2, "convolve");
  const auto& G = f1.groupoid();
  const Ring& ring = f1.ring();
  AlgebraElement out(f1.groupoid_ptr(), ring);
  // Every term of the defining sum is a composable pair (k, h) with kh = g,
  // so walking the two supports visits exactly the nonzero terms.
  for (const auto& [h, b] : f2.coefficients()) {
    for (const auto& [k, a] : f1.coefficients()) {
      if (auto kh = G.compose(k, h)) out.add_term(*kh, ring.mul(a, b));
    }
  }
  return out;
}

AlgebraElement operator*(const AlgebraElement& f1, const AlgebraElement& f2) {
  return convolve(f1, f2);
}

CompactOpen local_unit(std::span<const AlgebraElement> fs) {
  if (fs.empty()) throw InvalidArgument("local_unit: empty list");
  const auto& G = fs.front().groupoid();
  std::vector<Object> pts;
  for (const auto& f : fs) {
    if (!same_groupoid(f.groupoid_ptr(), fs.front().groupoid_ptr())) {
      throw InvalidArgument("local_unit: elements live over different groupoids");
    }
    for (Arrow a : f.support()) {
      auto u = Bisection::singleton(G, a);
      for (Object x : source_set(G, u)) pts.push_back(x);
      for (Object x : target_set(G, u)) pts.push_back(x);
    }
  }
  return make_compact_open(G, std::move(pts));
}

CornerAlgebra corner_algebra(const GroupoidPtr& g, const CompactOpen& u, const Ring& ring) {
  const auto& G = *g;
  CompactOpen pts = make_compact_open(G, u);
  CornerAlgebra out{restrict_groupoid(G, pts), restriction_embedding(G, pts), 0, Report::pass()};
  out.dimension = out.embedding.size();

  std::vector<bool> embedded(G.num_arrows());
  for (Arrow a : out.embedding) embedded[index(a)] = true;

  auto unit_u = char_fn(g, pts, ring);
  for (Arrow a : G.arrows()) {
    auto corner = unit_u * singleton(g, a, ring) * unit_u;
    auto expected = embedded[index(a)] ? singleton(g, a, ring) : AlgebraElement(g, ring);
    if (!(corner == expected)) {
      out.verification = Report::fail("corner image", G.name(a));
      return out;
    }
  }

  auto sub = share(out.restricted);
  for (std::size_t i = 0; i < out.embedding.size(); ++i) {
    for (std::size_t j = 0; j < out.embedding.size(); ++j) {
      auto local = singleton(sub, arrow_at(i), ring) * singleton(sub, arrow_at(j), ring);
      AlgebraElement pushed(g, ring);
      for (const auto& [a, c] : local.coefficients()) pushed.add_term(out.embedding[index(a)], c);
      auto ambient = singleton(g, out.embedding[i], ring) * singleton(g, out.embedding[j], ring);
      if (!(pushed == ambient)) {
        out.verification = Report::fail("corner table",
                                        G.name(out.embedding[i]) + "*" + G.name(out.embedding[j]));
        return out;
      }
    }
  }
  // chi_U must be the identity of the corner.
  for (Arrow a : out.embedding) {
    auto s = singleton(g, a, ring);
    if (!(unit_u * s == s) || !(s * unit_u == s)) {
      out.verification = Report::fail("corner unit", G.name(a));
      return out;
    }
  }
  return out;
}

MultiplicationTable multiplication_table(const GroupoidPtr& g, const Ring& ring) {
  const std::size_t n = g->num_arrows();
  if (n > kTableArrowLimit) {
    throw SizeLimitExceeded("multiplication_table: " + std::to_string(n) +
                            " arrows exceeds the limit of " + std::to_string(kTableArrowLimit));
  }
  MultiplicationTable table{g, ring, {}};
  table.entries.reserve(n * n);
  for (Arrow a : g->arrows()) {
    auto left = singleton(g, a, ring);
    for (Arrow b : g->arrows()) table.entries.push_back(left * singleton(g, b, ring));
  }
  return table;
}

std::string MultiplicationTable::to_tsv() const {
  std::ostringstream os;
  const auto& G = *groupoid;
  os << "*";
  for (Arrow b : G.arrows()) os << '\t' << G.name(b);
  os << '\n';
  for (Arrow a : G.arrows()) {
    os << G.name(a);
    for (Arrow b : G.arrows()) os << '\t' << at(a, b).to_string();
    os << '\n';
  }
  return os.str();
}

}  // namespace etale
