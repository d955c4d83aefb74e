#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etale/algebra.hpp"
#include "etale/gmodule.hpp"
#include "etale/gsheaf.hpp"
#include "etale/report.hpp"

namespace etale {

// ---- Gamma_c: sheaves -> modules -------------------------------------

/// A (compactly supported, i.e. any) global section: one vector per stalk.
struct Section {
  std::vector<Vector> values;
  friend bool operator==(const Section&, const Section&) = default;
};

// Offsets of the stalk blocks inside the carrier of gamma_c(e).
std::vector<std::size_t> block_offsets(const GSheaf& e);
Vector section_vector(const GSheaf& e, const Section& s);
Section section_from_vector(const GSheaf& e, const Vector& v);
// (s f)(x) = sum over d(g) = x of f(g) s(r(g)) B_g, straight from the
// formula (no block matrices involved).
Section act_section(const GSheaf& e, const Section& s, const AlgebraElement& f);

// Carrier = direct sum of the stalks in object order; chi_{g} acts by B_g
// placed in block (r(g), d(g)).
GModule gamma_c(const GSheaf& e);
// Block-diagonal diag(phi_x).
GModuleHom gamma_c_mor(const GSheafMor& phi);

// ---- Germs ----------------------------------------------------------------

/// [m]_x. With {x} the smallest neighbourhood of x the direct limit
/// collapses, and two germs agree iff m A_{u(x)} = n A_{u(x)}.
struct Germ {
  Object base;
  Vector representative;
  Vector normal_form;

  friend bool operator==(const Germ& a, const Germ& b) {
    return a.base == b.base && a.normal_form == b.normal_form;
  }
};

Germ germ_at(const GModule& m, const Vector& v, Object x);
bool is_zero(const Germ& germ);
// [m]_{r(g)} g = [m chi_{g}]_{d(g)}.
Germ germ_transport(const GModule& m, const Germ& germ, Arrow g);
// Same thing computed through an arbitrary bisection u containing g.
Germ germ_transport_along(const GModule& m, const Germ& germ, const Bisection& u, Arrow g);

// ---- Sh: modules -> sheaves ---------------------------------------------

/// Sh(M) on free stalks. bases[x] holds, as rows, the echelon basis of
/// the image of A_{u(x)} (germs at x in normal form); the sheaf's stalk at
/// x is the coordinate space of that basis.
struct Sheafification {
  GModule module;
  GSheaf sheaf;
  std::vector<Matrix> bases;

  // Coordinates of a germ in bases[germ.base].
  Vector coordinates(const Germ& germ) const;
  // The element coords * bases[x] of M, a representative of that germ.
  Vector representative(Object x, const Vector& coords) const;
};

// Needs a field or Z; throws UnsupportedRing otherwise.
Sheafification sheafify(const GModule& m);
// Stalk maps of Sh(f) in the bases of the two sheafifications.
GSheafMor sh_mor(const GModuleHom& f, const Sheafification& source,
                 const Sheafification& target);
GSheafMor sh_mor(const GModuleHom& f);

// ---- eta and epsilon -------------------------------------------------------

enum class IsoDirection { eta, epsilon };

struct NaturalIsoCertificate {
  IsoDirection direction;
  // eta: one matrix M -> Gamma_c(Sh(M)). epsilon: one matrix per object,
  // Sh(Gamma_c(E))_x -> E_x.
  std::vector<Matrix> components;
  std::vector<Matrix> inverse_components;
  std::vector<std::string> checks;  // names of the checks that passed
};

/// Either a certificate (every check passed) or the failing check.
struct CertificateResult {
  Report report;
  std::optional<NaturalIsoCertificate> certificate;

  explicit operator bool() const { return certificate.has_value(); }
};

// Checks: homomorphism (eta(m chi_{g}) = eta(m) chi_{g} for all g),
// injectivity (trivial kernel), surjectivity (an explicit preimage for
// every standard section, built as m_1 chi_{x_1} + ... + m_n chi_{x_n}).
CertificateResult eta(const GModule& m);
CertificateResult eta(const Sheafification& sh);

// Checks: support (the germ basis at x lives in the x block), bijectivity
// of every eps_x, equivariance eps_{r(g)} B^E_g = B^Sh_g eps_{d(g)}.
CertificateResult epsilon(const GSheaf& e);

// Both first require a genuine morphism (failing with its validate_* report).
// eta_M f = Gamma_c(Sh f) eta_N, as matrices f * H_N = H_M * Gamma_c(Sh f).
Report check_naturality(const GModuleHom& f);
// Sh(Gamma_c(phi)) eps = eps phi stalkwise.
Report check_naturality(const GSheafMor& phi);

}  // namespace etale
