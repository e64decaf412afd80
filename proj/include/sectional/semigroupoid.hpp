#ifndef SECTIONAL_SEMIGROUPOID_HPP_
#define SECTIONAL_SEMIGROUPOID_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "kernels.hpp"

namespace sectional {

  using ArrowId  = std::uint32_t;
  using VertexId = std::uint32_t;

  inline constexpr ArrowId kNoArrow = kNone;

  //! Raw tables of a candidate semigroupoid; `prod` is arrows x arrows,
  //! row-major, with kNoArrow where the product is undefined.
  struct SemigroupoidTables {
    std::string              id;
    std::vector<std::string> vertex_names;
    std::vector<std::string> arrow_names;
    std::vector<VertexId>    src;
    std::vector<VertexId>    rng;
    std::vector<ArrowId>     prod;
  };

  class Semigroupoid {
   public:
    //! Full enumeration of the axioms. Reported in this order: a missing
    //! product on a composable pair, a product on a non-composable pair,
    //! source/range of a product, associativity.
    static Checked<Semigroupoid> validate(SemigroupoidTables tables,
                                          ExecPolicy         policy = default_policy());

    std::string const& id() const noexcept {
      return t_.id;
    }
    std::size_t num_arrows() const noexcept {
      return t_.arrow_names.size();
    }
    std::size_t num_vertices() const noexcept {
      return t_.vertex_names.size();
    }
    VertexId src(ArrowId a) const {
      return t_.src[a];
    }
    VertexId rng(ArrowId a) const {
      return t_.rng[a];
    }
    bool composable(ArrowId a, ArrowId b) const {
      return t_.src[a] == t_.rng[b];
    }
    //! kNoArrow unless composable.
    ArrowId prod(ArrowId a, ArrowId b) const {
      return t_.prod[a * num_arrows() + b];
    }
    std::vector<std::pair<ArrowId, ArrowId>> const& composable_pairs() const noexcept {
      return pairs_;
    }

    std::string const& arrow_name(ArrowId a) const {
      return t_.arrow_names[a];
    }
    std::string const& vertex_name(VertexId v) const {
      return t_.vertex_names[v];
    }
    std::optional<ArrowId>  find_arrow(std::string const& name) const;
    std::optional<VertexId> find_vertex(std::string const& name) const;
    ArrowId                 arrow(std::string const& name) const;  // throws InputError

    SemigroupoidTables const& tables() const noexcept {
      return t_;
    }
    Semigroupoid renamed(std::string id) const;

    nlohmann::json to_json() const;
    //! Same vertices, arrows (by name) and product table.
    bool operator==(Semigroupoid const& o) const;

   private:
    SemigroupoidTables                       t_;
    std::vector<std::pair<ArrowId, ArrowId>> pairs_;
  };

  using SemigroupoidRef = std::shared_ptr<Semigroupoid const>;

  inline SemigroupoidRef share(Semigroupoid s) {
    return std::make_shared<Semigroupoid const>(std::move(s));
  }

  class InverseSemigroupoid {
   public:
    //! Checks the four inverse conditions, uniqueness of the inverse, the
    //! rules (s*)* = s, (st)* = t*s*, commuting idempotents, and the
    //! compatibility of the natural order with * and products. The order is
    //! computed by all four characterizations; a disagreement throws
    //! InternalError.
    static Checked<InverseSemigroupoid> validate(SemigroupoidRef base, std::vector<ArrowId> inv);
    //! As above with the inverse table found by search (fails when some
    //! arrow has no inverse or several).
    static Checked<InverseSemigroupoid> infer(SemigroupoidRef base);

    Semigroupoid const& base() const noexcept {
      return *base_;
    }
    SemigroupoidRef const& base_ref() const noexcept {
      return base_;
    }
    ArrowId inv(ArrowId s) const {
      return inv_[s];
    }
    std::vector<ArrowId> const& inverse_table() const noexcept {
      return inv_;
    }
    bool is_idempotent(ArrowId e) const {
      return idempotent_[e];
    }
    std::vector<ArrowId> const& idempotents() const noexcept {
      return idempotents_;
    }
    //! Natural partial order s <= t.
    bool leq(ArrowId s, ArrowId t) const {
      return order_[s * base_->num_arrows() + t];
    }

    //! The four characterizations, evaluated directly: (1) s = t s* s,
    //! (2) s = t e, (3) s = s s* t, (4) s = f t with e, f idempotent.
    bool leq_by(int characterization, ArrowId s, ArrowId t) const;

   private:
    SemigroupoidRef      base_;
    std::vector<ArrowId> inv_;
    std::vector<bool>    idempotent_;
    std::vector<ArrowId> idempotents_;
    std::vector<bool>    order_;
  };

  using InverseSemigroupoidRef = std::shared_ptr<InverseSemigroupoid const>;

  class Homomorphism {
   public:
    static Checked<Homomorphism> validate(SemigroupoidRef source, SemigroupoidRef target,
                                          std::vector<ArrowId> map, std::string id = {});

    std::string const& id() const noexcept {
      return id_;
    }
    Semigroupoid const& source() const noexcept {
      return *source_;
    }
    Semigroupoid const& target() const noexcept {
      return *target_;
    }
    SemigroupoidRef const& source_ref() const noexcept {
      return source_;
    }
    SemigroupoidRef const& target_ref() const noexcept {
      return target_;
    }
    ArrowId operator()(ArrowId a) const {
      return map_[a];
    }
    std::vector<ArrowId> const& map() const noexcept {
      return map_;
    }
    bool is_rigid() const noexcept {
      return !non_rigid_.has_value();
    }
    //! Smallest non-composable pair whose images compose.
    std::optional<std::pair<ArrowId, ArrowId>> const& non_rigid_witness() const noexcept {
      return non_rigid_;
    }
    ValidationReport rigidity_report() const;

    static Homomorphism identity(SemigroupoidRef s);

   private:
    std::string                                 id_;
    SemigroupoidRef                             source_, target_;
    std::vector<ArrowId>                        map_;
    std::optional<std::pair<ArrowId, ArrowId>> non_rigid_;
  };

  //! Arrows are pairs (a, b), numbered a * |B| + b.
  Semigroupoid direct_product(Semigroupoid const& a, Semigroupoid const& b);

  struct GroupoidCheck {
    bool                     ok = false;
    std::vector<ArrowId>     unit;     // per vertex
    std::vector<ArrowId>     inverse;  // per arrow
    std::string              message;
    std::vector<std::string> witness;
  };
  GroupoidCheck is_groupoid(Semigroupoid const& s);

  //! Arrow bijection a -> b preserving source/range incidence and products,
  //! found by backtracking.
  std::optional<std::vector<ArrowId>> find_isomorphism(Semigroupoid const& a,
                                                       Semigroupoid const& b);

  //! Builds tables from named arrows and a product callback; the callback
  //! is only asked about composable pairs.
  template <typename Prod>
  SemigroupoidTables make_tables(std::string id, std::vector<std::string> vertices,
                                 std::vector<std::string> arrows, std::vector<VertexId> src,
                                 std::vector<VertexId> rng, Prod&& prod) {
    SemigroupoidTables t{std::move(id), std::move(vertices), std::move(arrows), std::move(src),
                         std::move(rng), {}};
    std::size_t const  n = t.arrow_names.size();
    t.prod.assign(n * n, kNoArrow);
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (t.src[a] == t.rng[b]) {
          t.prod[a * n + b] = prod(a, b);
        }
      }
    }
    return t;
  }

}  // namespace sectional

#endif  // SECTIONAL_SEMIGROUPOID_HPP_
