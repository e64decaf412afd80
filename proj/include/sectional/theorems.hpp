#ifndef SECTIONAL_THEOREMS_HPP_
#define SECTIONAL_THEOREMS_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actions.hpp"
#include "crossed.hpp"

namespace sectional {

  //! Outcome of one theorem instance: named boolean checks, ranks, and the
  //! failures (empty when the instance passed).
  struct TheoremReport {
    std::string                   theorem;
    std::string                   instance;
    nlohmann::json                ranks  = nlohmann::json::object();
    nlohmann::json                checks = nlohmann::json::object();
    std::vector<Certificate>      certificates;
    std::vector<ValidationReport> failures;

    void check(std::string const& name, bool ok, ValidationReport const& on_failure);
    bool passed() const;
    nlohmann::json to_json() const;
  };

  //! Rank-1 algebra R with basis {1}.
  AlgebraPresentation ring_as_algebra(Ring const& ring);

  //! Bundle over `base` whose fiber over x is the fiber of b over over[x];
  //! `over` must be a homomorphism into b's base.
  Bundle pullback_bundle(Bundle const& b, SemigroupoidRef base, std::vector<ArrowId> const& over,
                         std::string id);

  // ---------------------------------------------------------------------------
  // tensor products

  //! Basis u⊗v numbered u * rank(B) + v; needs a commutative ring.
  AlgebraPresentation tensor_product_algebra(AlgebraPresentation const& a,
                                             AlgebraPresentation const& b,
                                             ExecPolicy policy = default_policy());

  //! π×𝓔 over Γ×𝓔.
  Bundle bundle_times(Bundle const& b, SemigroupoidRef e);

  struct TensorTheorem {
    AlgebraRef       sectional;  // A(π)
    AlgebraRef       semigroupoid_algebra;  // R𝓔
    AlgebraRef       tensor;     // A(π) ⊗ R𝓔
    AlgebraRef       target;     // A(π×𝓔)
    LinearMapOnBasis t;
    TheoremReport    report;
  };

  TensorTheorem tensor_theorem(BundleRef b, SemigroupoidRef e,
                               ExecPolicy policy = default_policy());

  // ---------------------------------------------------------------------------
  // semidirect product bundles and naïve crossed products

  using LandPreactionRef = std::shared_ptr<LandPreaction const>;

  //! θ^Λ on a bundle, given by fiber matrices L_{s,γ}: R^{k_γ} -> R^{k_θs(γ)}
  //! for γ in dom θ^Γ_s.
  class BundleAction {
   public:
    //! Checks shapes (structural), associativity of θ^Γ, that
    //! L_{s*,θ_s γ} L_{s,γ} = 1, that each L intertwines the fiber products,
    //! and that L_{st,γ} = L_{s,θ_t γ} L_{t,γ}. Needs a commutative ring.
    static Checked<BundleAction> validate(LandPreactionRef theta, BundleRef bundle,
                                          std::vector<std::map<ArrowId, Matrix>> transports,
                                          std::string id = {});
    //! Identity matrices on every fiber (the ranks must be θ-invariant).
    static Checked<BundleAction> identity(LandPreactionRef theta, BundleRef bundle);

    std::string const& id() const noexcept {
      return id_;
    }
    LandPreaction const& theta() const noexcept {
      return *theta_;
    }
    LandPreactionRef const& theta_ref() const noexcept {
      return theta_;
    }
    Bundle const& bundle() const noexcept {
      return *bundle_;
    }
    BundleRef const& bundle_ref() const noexcept {
      return bundle_;
    }
    Matrix const& transport(ArrowId s, ArrowId g) const {
      return transports_[s].at(g);
    }

   private:
    std::string                             id_;
    LandPreactionRef                        theta_;
    BundleRef                               bundle_;
    std::vector<std::map<ArrowId, Matrix>>  transports_;
  };

  struct SemidirectBundle {
    SemidirectProduct base;
    BundleRef         bundle;
  };

  //! S⋉π over S⋉Γ: fiber over (s,γ) is R^{k_γ}, and the product of x over
  //! (s,a) with y over (t,b) is L_{t*}(μ(x, L_t y)).
  Checked<SemidirectBundle> bundle_semidirect(BundleAction const& theta);

  //! Θ on A(π): dom Θ_s is spanned by the basis sections over dom θ^Γ_s and
  //! Θ_s(δ_γ x) = δ_{θ_s γ} L_{s,γ} x.
  Checked<AlgebraAction> induced_theta(BundleAction const& theta,
                                       ExecPolicy          policy = default_policy());

  struct CrossedTheorem {
    SemidirectBundle semidirect;
    AlgebraRef       sectional;  // A(S⋉π)
    AlgebraAction    theta;      // induced on A(π)
    CrossedAlgebra   crossed;    // S⋆A(π)
    LinearMapOnBasis psi;        // S⋆A(π) -> A(S⋉π), inverse Φ
    LscriptIso       lscript;
    TheoremReport    report;
  };

  Checked<CrossedTheorem> crossed_theorem(BundleAction const& theta,
                                          ExecPolicy          policy = default_policy());

  // ---------------------------------------------------------------------------
  // smash and skew products

  struct SmashProduct {
    AlgebraRef                                   algebra;
    std::vector<std::pair<std::size_t, ArrowId>> components;  // (basis of A, h)
  };

  //! A#G with basis v#h for 𝔰(deg v) = 𝔯(h) and
  //! (a#g)(b#h) = a p_{gh^-1}(b) #h when 𝔰(g) = 𝔰(h). Graded by deg v.
  Checked<SmashProduct> smash_product(AlgebraPresentation const& a,
                                      ExecPolicy policy = default_policy());

  struct SkewProduct {
    SemigroupoidRef                          semigroupoid;
    std::vector<std::pair<ArrowId, ArrowId>> components;  // (γ, g)
    Homomorphism                             grading;     // (γ, g) ↦ d(γ)
  };

  //! Γ#_d G: arrows (γ,g) with 𝔰(d(γ)) = 𝔯(g), source (𝔰γ, g), range
  //! (𝔯γ, d(γ)g), product (γ1γ2, g2) when g1 = d(γ2)g2.
  Checked<SkewProduct> skew_product(Homomorphism const& d);

  struct SmashTheorem {
    AlgebraRef       sectional;  // A(π) graded by d
    SmashProduct     smash;      // A(π)#G
    SkewProduct      skew;
    AlgebraRef       target;     // A(π#_d G)
    LinearMapOnBasis t;
    TheoremReport    report;
  };

  Checked<SmashTheorem> smash_theorem(BundleRef b, Homomorphism const& d,
                                      ExecPolicy policy = default_policy());

  // ---------------------------------------------------------------------------
  // quotients

  //! A rigid congruence on the base with invertible fiber transports
  //! T_{γ->γ'} for γ ~ γ'. Missing transports are filled in through the
  //! class representative (identity when nothing is given).
  class BundleCongruence {
   public:
    //! Checks, in order: equal ranks within classes (structural),
    //! invertibility, cocycle coherence of the given transports, and that
    //! transports intertwine the fiber products.
    static Checked<BundleCongruence> validate(BundleRef bundle, RigidCongruence base,
                                              std::map<std::pair<ArrowId, ArrowId>, Matrix> given,
                                              std::string id = {});
    static BundleCongruence identity(BundleRef bundle);

    std::string const& id() const noexcept {
      return id_;
    }
    Bundle const& bundle() const noexcept {
      return *bundle_;
    }
    BundleRef const& bundle_ref() const noexcept {
      return bundle_;
    }
    RigidCongruence const& base() const noexcept {
      return base_;
    }
    //! T_{a->b} for a ~ b.
    Matrix transport(ArrowId a, ArrowId b) const;

   private:
    std::string         id_;
    BundleRef           bundle_;
    RigidCongruence     base_;
    std::vector<Matrix> to_rep_, from_rep_;

    BundleCongruence(RigidCongruence base) : base_(std::move(base)) {}
  };

  struct QuotientBundle {
    Quotient  base;
    BundleRef bundle;
  };

  //! Fiber over a class is the fiber of its representative; products are
  //! transported through T and compared against every other pair of
  //! representatives (InternalError on a mismatch).
  QuotientBundle quotient_bundle(BundleCongruence const& c);

  struct QuotientTheorem {
    QuotientBundle      quotient;
    AlgebraRef          source;  // A(π)
    AlgebraRef          target;  // A(π/~)
    LinearMapOnBasis    t;
    std::vector<Vector> kernel;      // solve_linear
    std::vector<Vector> generators;  // conjugate-section differences
    TheoremReport       report;
  };

  //! Needs linear algebra over the ring (CapabilityError otherwise).
  QuotientTheorem quotient_map_and_kernel(BundleCongruence const& c,
                                          ExecPolicy policy = default_policy());

  // ---------------------------------------------------------------------------
  // groupoid of germs

  struct GermCorollary {
    GermQuotient        germ;
    AlgebraRef          group_algebra;  // A𝒢
    AlgebraAction       theta;          // induced on A𝒢
    CrossedAlgebra      crossed;        // S⋆A𝒢
    std::vector<Vector> generators;     // δ_s a - δ_t a
    std::vector<Vector> ideal;          // basis of the generated ideal
    AlgebraRef          target;         // A(𝒢germ)
    LinearMapOnBasis    map;
    TheoremReport       report;
  };

  Checked<GermCorollary> germ_corollary(LandPreactionRef theta, AlgebraRef a,
                                        ExecPolicy policy = default_policy());

}  // namespace sectional

#endif  // SECTIONAL_THEOREMS_HPP_
