#include "sectional/algebra.hpp"

#include <algorithm>
#include <deque>

namespace sectional {

  namespace {
    std::optional<ValidationReport> graded_closure_failure(Ring const&                     ring,
                                                           std::vector<std::string> const& labels,
                                                           StructureConstants const&       sc,
                                                           Grading const&                  g) {
      Semigroupoid const& G = *g.by;
      std::size_t const   n = labels.size();
      (void)ring;
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          ArrowId const du = g.degree[u], dv = g.degree[v];
          SparseVector const& p = sc.at(u, v);
          if (!G.composable(du, dv)) {
            if (!p.empty()) {
              return fail("graded-closure",
                          labels[u] + "·" + labels[v] + " ≠ 0 although deg " + G.arrow_name(du)
                              + " and " + G.arrow_name(dv) + " are not composable",
                          {labels[u], labels[v]});
            }
            continue;
          }
          ArrowId const duv = G.prod(du, dv);
          for (auto const& [w, c] : p) {
            if (g.degree[w] != duv) {
              return fail("graded-closure",
                          labels[u] + "·" + labels[v] + " has a component on " + labels[w]
                              + " of degree " + G.arrow_name(g.degree[w]) + " ≠ "
                              + G.arrow_name(duv),
                          {labels[u], labels[v], labels[w]});
            }
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace

  Checked<AlgebraPresentation> AlgebraPresentation::validate(Ring ring,
                                                             std::vector<std::string> labels,
                                                             StructureConstants      constants,
                                                             std::string             provenance,
                                                             std::optional<Grading>  grading,
                                                             ExecPolicy              policy) {
    std::size_t const n = labels.size();
    if (constants.n != n || constants.table.size() != n * n) {
      return structural_fail("structure", "structure constants do not match the basis size");
    }
    for (auto const& p : constants.table) {
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k].first >= n || (k > 0 && p[k - 1].first >= p[k].first) || p[k].second == 0) {
          return structural_fail("structure", "malformed structure constant entry");
        }
      }
    }
    if (grading) {
      if (!grading->by || grading->degree.size() != n) {
        return structural_fail("structure", "grading does not cover the basis");
      }
      for (ArrowId d : grading->degree) {
        if (d >= grading->by->num_arrows()) {
          return structural_fail("structure", "degree is not an arrow of the grading");
        }
      }
    }
    if (auto w = kernels::algebra_associativity_failure(ring, constants, policy)) {
      auto [i, j, k] = *w;
      return fail("associativity",
                  "(" + labels[i] + "·" + labels[j] + ")·" + labels[k] + " ≠ " + labels[i] + "·("
                      + labels[j] + "·" + labels[k] + ")",
                  {labels[i], labels[j], labels[k]});
    }
    if (grading) {
      if (auto r = graded_closure_failure(ring, labels, constants, *grading)) {
        return *r;
      }
    }
    AlgebraPresentation a;
    a.ring_       = std::move(ring);
    a.labels_     = std::move(labels);
    a.sc_         = std::move(constants);
    a.provenance_ = std::move(provenance);
    a.grading_    = std::move(grading);
    return a;
  }

  std::optional<std::size_t> AlgebraPresentation::find_label(std::string const& l) const {
    auto it = std::find(labels_.begin(), labels_.end(), l);
    if (it == labels_.end()) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
  }

  Grading const& AlgebraPresentation::grading() const {
    if (!grading_) {
      throw CapabilityError("algebra '" + provenance_ + "' is not graded");
    }
    return *grading_;
  }

  Vector AlgebraPresentation::basis_vector(std::size_t i) const {
    Vector v(rank());
    v[i] = ring_.one();
    return v;
  }

  Vector AlgebraPresentation::multiply(Vector const& x, Vector const& y) const {
    return sc_.multiply(ring_, x, y);
  }

  bool AlgebraPresentation::is_homogeneous(Vector const& x, ArrowId g) const {
    Grading const& gr = grading();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0 && gr.degree[i] != g) {
        return false;
      }
    }
    return true;
  }

  std::optional<Vector> AlgebraPresentation::find_unit() const {
    std::size_t const n = rank();
    Matrix            m(2 * n * n, n);
    Vector            b(2 * n * n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (auto const& [p, c] : sc_.at(k, j)) {
          m.at(j * n + p, k) = c;  // u e_j
        }
        for (auto const& [p, c] : sc_.at(j, k)) {
          m.at(n * n + j * n + p, k) = c;  // e_j u
        }
      }
      b[j * n + j]         = ring_.one();
      b[n * n + j * n + j] = ring_.one();
    }
    return solve_particular(m, b, ring_);
  }

  Checked<AlgebraPresentation> AlgebraPresentation::regraded(std::optional<Grading> g) const {
    return validate(ring_, labels_, sc_, provenance_, std::move(g));
  }

  std::string AlgebraPresentation::format(Vector const& x) const {
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        continue;
      }
      if (!out.empty()) {
        out += " + ";
      }
      if (x[i] != ring_.one()) {
        out += ring_.to_string(x[i]) + "*";
      }
      out += labels_[i];
    }
    return out.empty() ? "0" : out;
  }

  nlohmann::json AlgebraPresentation::to_json() const {
    nlohmann::json j;
    j["provenance"] = provenance_;
    j["ring"]       = ring_.to_json();
    j["basis"]      = labels_;
    if (grading_) {
      nlohmann::json deg = nlohmann::json::object();
      for (std::size_t i = 0; i < rank(); ++i) {
        deg[labels_[i]] = grading_->by->arrow_name(grading_->degree[i]);
      }
      j["grading"] = {{"by", grading_->by->id()}, {"degree", deg}};
    }
    nlohmann::json prods = nlohmann::json::array();
    for (std::size_t a = 0; a < rank(); ++a) {
      for (std::size_t b = 0; b < rank(); ++b) {
        SparseVector const& p = sc_.at(a, b);
        if (p.empty()) {
          continue;
        }
        nlohmann::json terms = nlohmann::json::array();
        for (auto const& [k, c] : p) {
          terms.push_back({labels_[k], ring_.scalar_to_json(c)});
        }
        prods.push_back({labels_[a], labels_[b], terms});
      }
    }
    j["products"] = prods;
    return j;
  }

  Submodule ideal_closure(std::vector<Vector> const& generators, AlgebraPresentation const& a) {
    Submodule          span(a.ring(), a.rank());
    std::deque<Vector> todo;
    for (auto const& g : generators) {
      if (span.insert(g)) {
        todo.push_back(g);
      }
    }
    while (!todo.empty()) {
      Vector v = std::move(todo.front());
      todo.pop_front();
      for (std::size_t j = 0; j < a.rank(); ++j) {
        Vector const e = a.basis_vector(j);
        for (Vector w : {a.multiply(e, v), a.multiply(v, e)}) {
          if (span.insert(w)) {
            todo.push_back(std::move(w));
          }
        }
      }
    }
    return span;
  }

  bool is_two_sided_ideal(Submodule const& s, AlgebraPresentation const& a) {
    for (auto const& v : s.basis()) {
      for (std::size_t j = 0; j < a.rank(); ++j) {
        Vector const e = a.basis_vector(j);
        if (!s.contains(a.multiply(e, v)) || !s.contains(a.multiply(v, e))) {
          return false;
        }
      }
    }
    return true;
  }

}  // namespace sectional
