#ifndef SECTIONAL_LINEAR_MAP_HPP_
#define SECTIONAL_LINEAR_MAP_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"

namespace sectional {

  using AlgebraRef = std::shared_ptr<AlgebraPresentation const>;

  inline AlgebraRef share(AlgebraPresentation a) {
    return std::make_shared<AlgebraPresentation const>(std::move(a));
  }

  //! A map between two presentations given by the images of the source
  //! basis, with an optional declared inverse given the same way.
  struct LinearMapOnBasis {
    std::string                              name;
    AlgebraRef                               source;
    AlgebraRef                               target;
    std::vector<SparseVector>                images;
    std::optional<std::vector<SparseVector>> inverse;

    Vector apply(Vector const& x) const;
    Vector apply_inverse(Vector const& y) const;
    //! target.rank() x source.rank()
    Matrix matrix() const;
    //! The declared inverse as a map in its own right.
    LinearMapOnBasis inverted() const;

    nlohmann::json to_json() const;
  };

  struct CertifyOptions {
    bool       multiplicative         = true;
    bool       inverse_multiplicative = false;
    bool       degrees                = false;
    //! Cross-check bijectivity with solve_linear when the ring allows it.
    bool       linear_route           = true;
    ExecPolicy policy                 = default_policy();
  };

  struct Certificate {
    std::string                   map;
    std::size_t                   source_rank = 0;
    std::size_t                   target_rank = 0;
    std::optional<bool>           multiplicative;
    std::optional<bool>           inverse_multiplicative;
    std::optional<bool>           inverse_composites;  // both composites are identities
    std::optional<bool>           degrees;
    std::optional<bool>           bijective_linear;
    std::vector<ValidationReport> failures;

    bool           passed() const noexcept {
      return failures.empty();
    }
    nlohmann::json to_json() const;
  };

  Certificate certify(LinearMapOnBasis const& f, CertifyOptions const& options = {});

  //! Image spans the whole target (needs linear algebra).
  bool is_surjective(Matrix const& m, Ring const& ring);
  //! Square, injective and surjective.
  bool is_bijective(Matrix const& m, Ring const& ring);

}  // namespace sectional

#endif  // SECTIONAL_LINEAR_MAP_HPP_
