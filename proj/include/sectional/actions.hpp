#ifndef SECTIONAL_ACTIONS_HPP_
#define SECTIONAL_ACTIONS_HPP_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semigroupoid.hpp"

namespace sectional {

  //! Per actor arrow s, the graph of θ_s as (a, θ_s(a)) pairs.
  using ActionGraphs = std::vector<std::vector<std::pair<ArrowId, ArrowId>>>;

  class LandPreaction {
   public:
    //! Checks, in order: shapes, that each θ_s is a bijection onto its
    //! range, θ_{s*} = θ_s^-1, the ideals I(θ,v), the domain/range ideals
    //! and the isomorphism property of each θ_s, and the extension law for
    //! composable pairs. Then computes the partial / global / associative
    //! flags.
    static Checked<LandPreaction> validate(InverseSemigroupoidRef actor, SemigroupoidRef space,
                                           ActionGraphs graphs, std::string id = {});

    //! θ_s = id on the whole space for every s.
    static LandPreaction trivial(InverseSemigroupoidRef actor, SemigroupoidRef space);

    std::string const& id() const noexcept {
      return id_;
    }
    InverseSemigroupoid const& actor() const noexcept {
      return *actor_;
    }
    Semigroupoid const& space() const noexcept {
      return *space_;
    }
    InverseSemigroupoidRef const& actor_ref() const noexcept {
      return actor_;
    }
    SemigroupoidRef const& space_ref() const noexcept {
      return space_;
    }

    bool in_dom(ArrowId s, ArrowId a) const {
      return apply(s, a) != kNoArrow;
    }
    //! θ_s(a), or kNoArrow outside the domain.
    ArrowId apply(ArrowId s, ArrowId a) const {
      return table_[s * space_->num_arrows() + a];
    }
    //! Sorted domain of θ_s.
    std::vector<ArrowId> const& dom(ArrowId s) const {
      return dom_[s];
    }
    std::vector<ArrowId> ran(ArrowId s) const;

    bool is_partial() const noexcept {
      return partial_;
    }
    bool is_global() const noexcept {
      return global_;
    }
    bool is_associative() const noexcept {
      return !assoc_witness_.has_value();
    }
    //! (s, t, u, a, b, c) violating θ_{t*}(aθ_t(b))c = θ_{t*}(aθ_t(bc)).
    std::optional<std::array<ArrowId, 6>> const& associativity_witness() const noexcept {
      return assoc_witness_;
    }
    ValidationReport associativity_report() const;

    nlohmann::json to_json() const;

   private:
    std::string                           id_;
    InverseSemigroupoidRef                actor_;
    SemigroupoidRef                       space_;
    std::vector<ArrowId>                  table_;
    std::vector<std::vector<ArrowId>>     dom_;
    bool                                  partial_ = false;
    bool                                  global_  = false;
    std::optional<std::array<ArrowId, 6>> assoc_witness_;

    void classify();
  };

  struct SemidirectProduct {
    SemigroupoidRef                          semigroupoid;
    std::vector<std::pair<ArrowId, ArrowId>> components;  // arrow -> (s, a)
    std::vector<ArrowId>                     index;       // s * |Λ| + a -> arrow
    std::size_t                              space_arrows = 0;

    ArrowId arrow_of(ArrowId s, ArrowId a) const {
      return index[s * space_arrows + a];
    }
  };

  //! Arrows (s, a) with a in dom θ_s, ordered by s then a; vertices are the
  //! pairs (v, w) that occur as a source or range. Refuses non-associative
  //! preactions, and re-validates the resulting table.
  Checked<SemidirectProduct> semidirect_product(LandPreaction const& theta);

  class RigidCongruence {
   public:
    static Checked<RigidCongruence> validate(SemigroupoidRef base,
                                             std::vector<std::vector<ArrowId>> classes);
    static RigidCongruence identity(SemigroupoidRef base);

    Semigroupoid const& base() const noexcept {
      return *base_;
    }
    SemigroupoidRef const& base_ref() const noexcept {
      return base_;
    }
    //! Classes sorted internally and ordered by their least arrow.
    std::vector<std::vector<ArrowId>> const& classes() const noexcept {
      return classes_;
    }
    std::uint32_t class_of(ArrowId a) const {
      return class_of_[a];
    }
    ArrowId representative(std::uint32_t c) const {
      return classes_[c].front();
    }
    bool related(ArrowId a, ArrowId b) const {
      return class_of_[a] == class_of_[b];
    }

   private:
    SemigroupoidRef                   base_;
    std::vector<std::vector<ArrowId>> classes_;
    std::vector<std::uint32_t>        class_of_;
  };

  struct Quotient {
    SemigroupoidRef semigroupoid;  // arrow i is class i, named after its representative
    Homomorphism    projection;
  };

  //! The product of classes is read off representatives and then checked
  //! against every pair of members; a mismatch throws InternalError.
  Quotient quotient_semigroupoid(RigidCongruence const& c);

  struct GermQuotient {
    SemidirectProduct semidirect;
    RigidCongruence   congruence;
    Quotient          quotient;
    GroupoidCheck     groupoid;
  };

  //! Groupoid of germs: (s1, g) ~ (s2, g) when some u <= s1, s2 has g in
  //! dom θ_u. Transitivity of this relation is checked, not assumed.
  Checked<GermQuotient> germ_quotient(LandPreaction const& theta);

}  // namespace sectional

#endif  // SECTIONAL_ACTIONS_HPP_
