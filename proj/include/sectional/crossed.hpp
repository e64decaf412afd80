#ifndef SECTIONAL_CROSSED_HPP_
#define SECTIONAL_CROSSED_HPP_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bundle.hpp"

namespace sectional {

  //! Per actor arrow s: the basis elements of A spanning dom(Θ_s), and the
  //! image Θ_s(e_d) of each of them as a full coordinate vector.
  struct AlgebraActionData {
    std::vector<std::vector<std::size_t>> domains;
    std::vector<std::vector<Vector>>      images;
  };

  //! ∧-preaction of an inverse semigroupoid on an algebra whose domains
  //! are spanned by basis subsets.
  class AlgebraAction {
   public:
    //! Checks, in order: shapes, that every dom(Θ_s) is a two-sided ideal,
    //! Θ_{s*} = Θ_s^-1, that each Θ_s is multiplicative, and the extension
    //! law Θ_s Θ_t ⊆ Θ_st. Associativity is computed, not required.
    static Checked<AlgebraAction> validate(InverseSemigroupoidRef actor, AlgebraRef algebra,
                                           AlgebraActionData data, std::string id = {});
    //! Θ_s = id on all of A.
    static AlgebraAction trivial(InverseSemigroupoidRef actor, AlgebraRef algebra);

    std::string const& id() const noexcept {
      return id_;
    }
    InverseSemigroupoid const& actor() const noexcept {
      return *actor_;
    }
    InverseSemigroupoidRef const& actor_ref() const noexcept {
      return actor_;
    }
    AlgebraPresentation const& algebra() const noexcept {
      return *algebra_;
    }
    AlgebraRef const& algebra_ref() const noexcept {
      return algebra_;
    }
    std::vector<std::size_t> const& dom(ArrowId s) const {
      return domains_[s];
    }
    bool in_dom(ArrowId s, std::size_t d) const {
      return position_[s][d] != kNone;
    }
    Vector const& image(ArrowId s, std::size_t d) const {
      return images_[s][position_[s][d]];
    }
    //! Θ_s(x); x must vanish outside dom(Θ_s).
    Vector apply(ArrowId s, Vector const& x) const;
    //! Whether x lies in the span of dom(Θ_s).
    bool supported_in(ArrowId s, Vector const& x) const;

    bool is_associative() const noexcept {
      return !assoc_witness_.has_value();
    }
    //! (s, t, u, a, b, c) with a, b, c basis indices of A.
    std::optional<std::array<std::size_t, 6>> const& associativity_witness() const noexcept {
      return assoc_witness_;
    }
    ValidationReport associativity_report() const;

    nlohmann::json to_json() const;

   private:
    std::string                              id_;
    InverseSemigroupoidRef                   actor_;
    AlgebraRef                               algebra_;
    std::vector<std::vector<std::size_t>>    domains_;
    std::vector<std::vector<Vector>>         images_;
    std::vector<std::vector<std::uint32_t>>  position_;
    std::optional<std::array<std::size_t, 6>> assoc_witness_;
  };

  //! An algebra whose basis elements are δ_s·e_d for pairs (s, d).
  struct CrossedAlgebra {
    AlgebraRef                                   algebra;
    std::vector<std::pair<ArrowId, std::size_t>> components;
    std::vector<std::uint32_t>                   index;  // s * rank(A) + d -> basis id
    std::size_t                                  algebra_rank = 0;

    std::uint32_t basis_of(ArrowId s, std::size_t d) const {
      return index[s * algebra_rank + d];
    }
  };

  //! S⋆A with basis δ_s·e_d, d in dom(Θ_s), and
  //! (δ_s a)(δ_t b) = δ_st Θ_{t*}(a Θ_t(b)). Refuses non-associative actions.
  Checked<CrossedAlgebra> naive_crossed_product(AlgebraAction const& theta,
                                                Homomorphism const*  grading = nullptr,
                                                ExecPolicy           policy  = default_policy());

  //! ℒ(θ) with basis δ_s·e_d, d in ran(Θ_s), and
  //! (δ_x a)(δ_y b) = δ_xy Θ_x(Θ_{x*}(a) b).
  Checked<CrossedAlgebra> lscript_algebra(AlgebraAction const& theta,
                                          ExecPolicy           policy = default_policy());

  struct LscriptIso {
    CrossedAlgebra   crossed;
    CrossedAlgebra   lscript;
    LinearMapOnBasis phi;  // φ(f)(s) = Θ_s(f(s)), inverse f ↦ (s ↦ Θ_{s*}(f(s)))
  };

  Checked<LscriptIso> lscript_iso(AlgebraAction const& theta,
                                  ExecPolicy           policy = default_policy());

}  // namespace sectional

#endif  // SECTIONAL_CROSSED_HPP_
