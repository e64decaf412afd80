#ifndef SECTIONAL_ALGEBRA_HPP_
#define SECTIONAL_ALGEBRA_HPP_

#include <optional>
#include <string>
#include <vector>

#include "kernels.hpp"
#include "linalg.hpp"
#include "semigroupoid.hpp"

namespace sectional {

  //! Degree map from a basis into the arrows of a grading semigroupoid.
  struct Grading {
    SemigroupoidRef      by;
    std::vector<ArrowId> degree;
  };

  //! Free R-module with a labelled basis, a bilinear product given by
  //! structure constants, and optionally a grading.
  class AlgebraPresentation {
   public:
    //! Checks shapes, associativity on basis triples and, when graded, that
    //! A_g A_h lies in A_gh for composable (g,h) and vanishes otherwise.
    static Checked<AlgebraPresentation> validate(Ring ring, std::vector<std::string> labels,
                                                 StructureConstants      constants,
                                                 std::string             provenance,
                                                 std::optional<Grading>  grading = std::nullopt,
                                                 ExecPolicy              policy = default_policy());

    Ring const& ring() const noexcept {
      return ring_;
    }
    std::size_t rank() const noexcept {
      return labels_.size();
    }
    std::vector<std::string> const& labels() const noexcept {
      return labels_;
    }
    std::string const& label(std::size_t i) const {
      return labels_[i];
    }
    std::optional<std::size_t> find_label(std::string const& l) const;
    StructureConstants const& constants() const noexcept {
      return sc_;
    }
    SparseVector const& product(std::size_t i, std::size_t j) const {
      return sc_.at(i, j);
    }
    std::string const& provenance() const noexcept {
      return provenance_;
    }
    bool is_graded() const noexcept {
      return grading_.has_value();
    }
    Grading const& grading() const;
    ArrowId        degree(std::size_t i) const {
      return grading().degree[i];
    }

    Vector basis_vector(std::size_t i) const;
    Vector multiply(Vector const& x, Vector const& y) const;

    //! Whether x vanishes outside the basis elements of degree g.
    bool is_homogeneous(Vector const& x, ArrowId g) const;

    //! The two-sided unit if one exists (needs linear algebra).
    std::optional<Vector> find_unit() const;

    //! Same algebra with a different (or no) grading; the graded closure is
    //! re-checked.
    Checked<AlgebraPresentation> regraded(std::optional<Grading> grading) const;

    std::string    format(Vector const& x) const;
    nlohmann::json to_json() const;

   private:
    Ring                     ring_ = Ring::integers();
    std::vector<std::string> labels_;
    StructureConstants       sc_;
    std::string              provenance_;
    std::optional<Grading>   grading_;

    AlgebraPresentation() = default;
  };

  //! Smallest two-sided ideal containing the generators: the span is
  //! multiplied by every basis element on both sides until nothing new
  //! appears.
  Submodule ideal_closure(std::vector<Vector> const& generators, AlgebraPresentation const& a);

  //! The span is closed under multiplication by basis elements on both sides.
  bool is_two_sided_ideal(Submodule const& s, AlgebraPresentation const& a);

}  // namespace sectional

#endif  // SECTIONAL_ALGEBRA_HPP_
