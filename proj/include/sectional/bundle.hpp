#ifndef SECTIONAL_BUNDLE_HPP_
#define SECTIONAL_BUNDLE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "linear_map.hpp"
#include "semigroupoid.hpp"

namespace sectional {

  enum class BundleMode { structure_constants, ring_fiber };

  //! Constants of one composable pair (a, b): c[i][j] is the product of the
  //! i-th basis element over a with the j-th over b, in R^{k_ab}.
  using PairConstants = std::vector<std::vector<Vector>>;

  struct BundleData {
    std::string                                         id;
    std::vector<std::size_t>                            ranks;  // per base arrow
    std::map<std::pair<ArrowId, ArrowId>, PairConstants> constants;
    BundleMode                                          mode = BundleMode::structure_constants;
    //! ring-fiber mode: central twist per composable pair (absent = 1)
    std::map<std::pair<ArrowId, ArrowId>, Scalar>       twist;
    //! optional basis names of the fiber over each arrow
    std::vector<std::vector<std::string>>               fiber_labels;
  };

  //! R-bundle over a finite semigroupoid with free fibers R^{k_γ}.
  //! In structure-constants mode absent pairs have zero product; the ring
  //! must be commutative. In ring-fiber mode every fiber has rank 1 and
  //! the product is x y t_(a,b) with t central.
  class Bundle {
   public:
    static Checked<Bundle> validate(Ring ring, SemigroupoidRef base, BundleData data,
                                    ExecPolicy policy = default_policy());

    //! Rank-1 fibers, every product 1 (ring-fiber mode, any ring).
    static Bundle trivial(Ring ring, SemigroupoidRef base);

    std::string const& id() const noexcept {
      return id_;
    }
    Ring const& ring() const noexcept {
      return ring_;
    }
    Semigroupoid const& base() const noexcept {
      return *base_;
    }
    SemigroupoidRef const& base_ref() const noexcept {
      return base_;
    }
    BundleMode mode() const noexcept {
      return mode_;
    }
    std::size_t rank(ArrowId g) const {
      return ranks_[g];
    }
    std::vector<std::size_t> const& ranks() const noexcept {
      return ranks_;
    }
    //! Index of (g, 0) in the flattened basis of all fibers.
    std::size_t offset(ArrowId g) const {
      return offsets_[g];
    }
    std::size_t total_rank() const noexcept {
      return offsets_.back();
    }
    //! Inverse of offset: the arrow and fiber index of a flattened basis id.
    std::pair<ArrowId, std::size_t> locate(std::size_t k) const;
    std::string const&              fiber_label(ArrowId g, std::size_t i) const {
      return labels_[g][i];
    }

    //! μ(e_i ⊗ e_j) over the composable pair (a, b); empty vector of length
    //! k_ab when no constants were given.
    Vector const& mu(ArrowId a, ArrowId b, std::size_t i, std::size_t j) const;
    //! μ_(a,b)(x ⊗ y) = Σ x_i y_j c[i][j], scalars kept in this order.
    Vector fiber_product(ArrowId a, ArrowId b, Vector const& x, Vector const& y) const;

    nlohmann::json to_json() const;

   private:
    std::string                            id_;
    Ring                                   ring_ = Ring::integers();
    SemigroupoidRef                        base_;
    BundleMode                             mode_ = BundleMode::structure_constants;
    std::vector<std::size_t>               ranks_;
    std::vector<std::size_t>               offsets_;
    std::vector<std::vector<std::string>>  labels_;
    std::vector<std::uint32_t>             pair_index_;  // a*n+b -> slot in constants_
    std::vector<PairConstants>             constants_;

    Bundle() = default;
  };

  using BundleRef = std::shared_ptr<Bundle const>;

  inline BundleRef share(Bundle b) {
    return std::make_shared<Bundle const>(std::move(b));
  }

  //! Finitely supported section, stored sparsely; zero values are pruned so
  //! that equality is structural.
  class Section {
   public:
    explicit Section(BundleRef bundle) : bundle_(std::move(bundle)) {}

    BundleRef const& bundle() const noexcept {
      return bundle_;
    }
    std::map<ArrowId, Vector> const& values() const noexcept {
      return values_;
    }
    Vector at(ArrowId g) const;
    void   set(ArrowId g, Vector v);

    Vector         to_vector() const;  // in the flattened basis
    static Section from_vector(BundleRef bundle, Vector const& v);
    static Section random(BundleRef bundle, std::mt19937_64& gen, double density = 0.5);

    bool operator==(Section const& o) const {
      return bundle_ == o.bundle_ && values_ == o.values_;
    }

   private:
    BundleRef                 bundle_;
    std::map<ArrowId, Vector> values_;
  };

  //! (α∗β)(γ) = Σ_{ab=γ} μ_(a,b)(α(a) ⊗ β(b)), summed directly over the
  //! supports. Throws InputError when the sections live on different bundles.
  Section convolve(Section const& alpha, Section const& beta);

  //! Basis (γ, i) in flattened order; constants from the fiber products.
  //! With a grading c: Γ -> G the degree of (γ, i) is c(γ).
  AlgebraPresentation sectional_algebra(Bundle const&              b,
                                        Homomorphism const*        grading = nullptr,
                                        ExecPolicy                 policy  = default_policy());

  //! Same as sectional_algebra, tabulated with an explicit policy; exposed
  //! for the benchmark.
  StructureConstants sectional_constants(Bundle const& b, ExecPolicy policy);

  //! Label of the basis section (γ, i).
  std::string section_label(Bundle const& b, ArrowId g, std::size_t i);
  //! "δγ" for a unit label "1", otherwise "δγ·label".
  std::string delta_label(std::string const& arrow, std::string const& label);

  struct GradedBundle {
    Bundle                                       bundle;
    //! basis index of A for each flattened bundle basis element
    std::vector<std::size_t>                     to_algebra;
  };

  //! Fibers are the homogeneous components of A over its grading.
  GradedBundle bundle_from_graded(AlgebraPresentation const& a);

  //! The map A(η_A) -> A, α ↦ Σ_g π₂(α(g)), with its inverse; source graded
  //! by the same semigroupoid as A.
  LinearMapOnBasis graded_roundtrip_iso(AlgebraRef a);

  //! AΓ as the sectional algebra of the projection A × Γ -> Γ.
  AlgebraPresentation semigroupoid_algebra(Ring const& ring, SemigroupoidRef gamma);
  AlgebraPresentation semigroupoid_algebra(AlgebraPresentation const& a, SemigroupoidRef gamma);
  Bundle              product_bundle(AlgebraPresentation const& a, SemigroupoidRef gamma);

}  // namespace sectional

#endif  // SECTIONAL_BUNDLE_HPP_
