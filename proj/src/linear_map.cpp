#include "sectional/linear_map.hpp"

namespace sectional {

  Vector LinearMapOnBasis::apply(Vector const& x) const {
    Ring const& ring = source->ring();
    Vector      out(target->rank());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0) {
        axpy(ring, out, x[i], images[i]);
      }
    }
    return out;
  }

  Vector LinearMapOnBasis::apply_inverse(Vector const& y) const {
    if (!inverse) {
      throw std::logic_error("map '" + name + "' has no declared inverse");
    }
    Ring const& ring = target->ring();
    Vector      out(source->rank());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] != 0) {
        axpy(ring, out, y[i], (*inverse)[i]);
      }
    }
    return out;
  }

  Matrix LinearMapOnBasis::matrix() const {
    Matrix m(target->rank(), source->rank());
    for (std::size_t j = 0; j < images.size(); ++j) {
      for (auto const& [i, c] : images[j]) {
        m.at(i, j) = c;
      }
    }
    return m;
  }

  LinearMapOnBasis LinearMapOnBasis::inverted() const {
    if (!inverse) {
      throw std::logic_error("map '" + name + "' has no declared inverse");
    }
    return LinearMapOnBasis{name + "^-1", target, source, *inverse, images};
  }

  nlohmann::json LinearMapOnBasis::to_json() const {
    nlohmann::json j;
    j["name"]   = name;
    j["source"] = source->provenance();
    j["target"] = target->provenance();
    nlohmann::json img = nlohmann::json::object();
    for (std::size_t i = 0; i < images.size(); ++i) {
      img[source->label(i)] = target->format(to_dense(images[i], target->rank()));
    }
    j["images"] = img;
    return j;
  }

  nlohmann::json Certificate::to_json() const {
    nlohmann::json j;
    j["map"]         = map;
    j["source_rank"] = source_rank;
    j["target_rank"] = target_rank;
    auto put         = [&](char const* key, std::optional<bool> const& v) {
      if (v) {
        j[key] = *v;
      }
    };
    put("multiplicative", multiplicative);
    put("inverse_multiplicative", inverse_multiplicative);
    put("inverse_composites", inverse_composites);
    put("degrees", degrees);
    put("bijective_linear", bijective_linear);
    j["passed"]   = passed();
    j["failures"] = nlohmann::json::array();
    for (auto const& f : failures) {
      j["failures"].push_back(f.to_json());
    }
    return j;
  }

  bool is_surjective(Matrix const& m, Ring const& ring) {
    Submodule image(ring, m.rows);
    for (std::size_t j = 0; j < m.cols; ++j) {
      image.insert(m.column(j));
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
      Vector e(m.rows);
      e[i] = ring.one();
      if (!image.contains(e)) {
        return false;
      }
    }
    return true;
  }

  bool is_bijective(Matrix const& m, Ring const& ring) {
    return m.rows == m.cols && solve_linear(m, ring).kernel.empty() && is_surjective(m, ring);
  }

  namespace {
    std::optional<std::string> degree_name(AlgebraPresentation const& a, std::size_t i) {
      if (!a.is_graded()) {
        return std::nullopt;
      }
      return a.grading().by->arrow_name(a.degree(i));
    }
  }  // namespace

  Certificate certify(LinearMapOnBasis const& f, CertifyOptions const& options) {
    AlgebraPresentation const& src  = *f.source;
    AlgebraPresentation const& tgt  = *f.target;
    Ring const&                ring = src.ring();
    Certificate                c;
    c.map         = f.name;
    c.source_rank = src.rank();
    c.target_rank = tgt.rank();

    if (f.images.size() != src.rank()) {
      c.failures.push_back(structural_fail("shape", "map does not cover the source basis"));
      return c;
    }
    for (auto const& img : f.images) {
      for (auto const& [i, x] : img) {
        if (i >= tgt.rank()) {
          c.failures.push_back(structural_fail("shape", "image outside the target basis"));
          return c;
        }
        (void)x;
      }
    }

    if (options.multiplicative) {
      auto w = kernels::multiplicativity_failure(ring, src.constants(), tgt.constants(), f.images,
                                                 options.policy);
      c.multiplicative = !w.has_value();
      if (w) {
        auto [u, v] = *w;
        c.failures.push_back(fail("multiplicativity",
                                  f.name + "(" + src.label(u) + "·" + src.label(v) + ") ≠ " + f.name
                                      + "(" + src.label(u) + ")·" + f.name + "(" + src.label(v)
                                      + ")",
                                  {src.label(u), src.label(v)}));
      }
    }

    if (f.inverse) {
      bool ok = f.inverse->size() == tgt.rank();
      for (std::size_t u = 0; ok && u < src.rank(); ++u) {
        if (f.apply_inverse(f.apply(src.basis_vector(u))) != src.basis_vector(u)) {
          ok = false;
          c.failures.push_back(fail("inverse", "inverse(" + f.name + "(" + src.label(u) + ")) ≠ "
                                                   + src.label(u),
                                    {src.label(u)}));
        }
      }
      for (std::size_t w = 0; ok && w < tgt.rank(); ++w) {
        if (f.apply(f.apply_inverse(tgt.basis_vector(w))) != tgt.basis_vector(w)) {
          ok = false;
          c.failures.push_back(fail("inverse", f.name + "(inverse(" + tgt.label(w) + ")) ≠ "
                                                   + tgt.label(w),
                                    {tgt.label(w)}));
        }
      }
      c.inverse_composites = ok;
      if (options.inverse_multiplicative) {
        auto w = kernels::multiplicativity_failure(ring, tgt.constants(), src.constants(),
                                                   *f.inverse, options.policy);
        c.inverse_multiplicative = !w.has_value();
        if (w) {
          auto [u, v] = *w;
          c.failures.push_back(fail("multiplicativity",
                                    "the inverse of " + f.name + " is not multiplicative at ("
                                        + tgt.label(u) + "," + tgt.label(v) + ")",
                                    {tgt.label(u), tgt.label(v)}));
        }
      }
    }

    if (options.degrees) {
      bool ok = src.is_graded() && tgt.is_graded();
      if (!ok) {
        c.failures.push_back(fail("degrees", "both algebras must be graded"));
      }
      for (std::size_t u = 0; ok && u < src.rank(); ++u) {
        for (auto const& [w, x] : f.images[u]) {
          if (degree_name(tgt, w) != degree_name(src, u)) {
            ok = false;
            c.failures.push_back(fail("degrees",
                                      f.name + " sends " + src.label(u) + " of degree "
                                          + *degree_name(src, u) + " onto " + tgt.label(w)
                                          + " of degree " + *degree_name(tgt, w),
                                      {src.label(u), tgt.label(w)}));
            break;
          }
          (void)x;
        }
      }
      c.degrees = ok;
    }

    if (options.linear_route && ring.supports_linear_algebra()) {
      c.bijective_linear = is_bijective(f.matrix(), ring);
      if (!*c.bijective_linear) {
        c.failures.push_back(fail("bijectivity", f.name + " is not bijective (solve_linear)"));
      }
    }
    return c;
  }

}  // namespace sectional
