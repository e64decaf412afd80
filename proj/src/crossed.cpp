#include "sectional/crossed.hpp"

#include <algorithm>

namespace sectional {

  namespace {
    std::string basis_name(AlgebraPresentation const& a, std::size_t d) {
      return a.label(d);
    }
  }  // namespace

  Checked<AlgebraAction> AlgebraAction::validate(InverseSemigroupoidRef actor, AlgebraRef algebra,
                                                 AlgebraActionData data, std::string id) {
    InverseSemigroupoid const& S    = *actor;
    Semigroupoid const&        base = S.base();
    AlgebraPresentation const& A    = *algebra;
    Ring const&                ring = A.ring();
    std::size_t const          m    = base.num_arrows();
    std::size_t const          n    = A.rank();

    if (data.domains.size() != m || data.images.size() != m) {
      return structural_fail("structure", "action does not cover every actor arrow");
    }
    AlgebraAction t;
    t.id_      = std::move(id);
    t.actor_   = std::move(actor);
    t.algebra_ = std::move(algebra);
    t.position_.assign(m, std::vector<std::uint32_t>(n, kNone));
    for (ArrowId s = 0; s < m; ++s) {
      auto const& dom = data.domains[s];
      if (data.images[s].size() != dom.size()) {
        return structural_fail("structure", "images of Θ_" + base.arrow_name(s)
                                                + " do not match its domain");
      }
      for (std::size_t k = 0; k < dom.size(); ++k) {
        if (dom[k] >= n || (k > 0 && dom[k - 1] >= dom[k])) {
          return structural_fail("structure", "domain of Θ_" + base.arrow_name(s)
                                                  + " is not an increasing list of basis indices");
        }
        if (data.images[s][k].size() != n) {
          return structural_fail("structure", "an image under Θ_" + base.arrow_name(s)
                                                  + " has the wrong length");
        }
        t.position_[s][dom[k]] = static_cast<std::uint32_t>(k);
      }
    }
    t.domains_ = std::move(data.domains);
    t.images_  = std::move(data.images);

    // dom(Θ_s) is a two-sided ideal
    for (ArrowId s = 0; s < m; ++s) {
      for (std::size_t d : t.domains_[s]) {
        for (std::size_t j = 0; j < n; ++j) {
          for (auto const* p : {&A.product(j, d), &A.product(d, j)}) {
            for (auto const& [w, c] : *p) {
              if (!t.in_dom(s, w)) {
                bool const left = p == &A.product(j, d);
                return fail("ideal",
                            "dom Θ_" + base.arrow_name(s) + " is not an ideal: "
                                + (left ? A.label(j) + "·" + A.label(d)
                                        : A.label(d) + "·" + A.label(j))
                                + " has a component on " + A.label(w),
                            {base.arrow_name(s), A.label(d), A.label(j)});
              }
              (void)c;
            }
          }
        }
      }
    }

    // Θ_{s*} = Θ_s^-1
    for (ArrowId s = 0; s < m; ++s) {
      ArrowId const si = S.inv(s);
      if (t.domains_[s].size() != t.domains_[si].size()) {
        return fail("inverse", "dom Θ_" + base.arrow_name(s) + " and dom Θ_"
                                   + base.arrow_name(si) + " have different ranks",
                    {base.arrow_name(s)});
      }
      for (std::size_t k = 0; k < t.domains_[s].size(); ++k) {
        std::size_t const d = t.domains_[s][k];
        Vector const&     y = t.images_[s][k];
        if (!t.supported_in(si, y) || t.apply(si, y) != A.basis_vector(d)) {
          return fail("inverse",
                      "Θ_" + base.arrow_name(si) + "(Θ_" + base.arrow_name(s) + "("
                          + basis_name(A, d) + ")) ≠ " + basis_name(A, d),
                      {base.arrow_name(s), A.label(d)});
        }
      }
    }

    // each Θ_s is multiplicative
    for (ArrowId s = 0; s < m; ++s) {
      for (std::size_t a : t.domains_[s]) {
        for (std::size_t b : t.domains_[s]) {
          Vector const lhs = t.apply(s, to_dense(A.product(a, b), n));
          Vector const rhs = A.multiply(t.image(s, a), t.image(s, b));
          if (lhs != rhs) {
            return fail("homomorphism",
                        "Θ_" + base.arrow_name(s) + "(" + A.label(a) + "·" + A.label(b)
                            + ") ≠ Θ_" + base.arrow_name(s) + "(" + A.label(a) + ")·Θ_"
                            + base.arrow_name(s) + "(" + A.label(b) + ")",
                        {base.arrow_name(s), A.label(a), A.label(b)});
          }
        }
      }
    }

    // Θ_st extends Θ_s Θ_t: for b in ran Θ_t ∩ dom Θ_s, x = Θ_{t*}(e_b)
    for (auto [s, u] : base.composable_pairs()) {
      ArrowId const su = base.prod(s, u);
      ArrowId const ui = S.inv(u);
      for (std::size_t b : t.domains_[ui]) {
        if (!t.in_dom(s, b)) {
          continue;
        }
        Vector const& x = t.image(ui, b);
        if (!t.supported_in(su, x) || t.apply(su, x) != t.image(s, b)) {
          return fail("extension",
                      "Θ_" + base.arrow_name(su) + " does not extend Θ_" + base.arrow_name(s)
                          + "Θ_" + base.arrow_name(u) + " at Θ_" + base.arrow_name(ui) + "("
                          + A.label(b) + ")",
                      {base.arrow_name(s), base.arrow_name(u), A.label(b)});
        }
      }
    }

    // associativity: Θ_{t*}(a Θ_t(b)) c = Θ_{t*}(a Θ_t(b c)) for stu defined,
    // a in dom Θ_s, b in dom Θ_t, c in ran Θ_u
    for (ArrowId s = 0; s < m && !t.assoc_witness_; ++s) {
      for (ArrowId u1 = 0; u1 < m && !t.assoc_witness_; ++u1) {
        if (!base.composable(s, u1)) {
          continue;
        }
        ArrowId const ti = S.inv(u1);
        for (ArrowId u2 = 0; u2 < m && !t.assoc_witness_; ++u2) {
          if (!base.composable(u1, u2)) {
            continue;
          }
          for (std::size_t a : t.domains_[s]) {
            for (std::size_t b : t.domains_[u1]) {
              Vector const ab = A.multiply(A.basis_vector(a), t.image(u1, b));
              Vector const l  = t.apply(ti, ab);
              for (std::size_t c : t.domains_[S.inv(u2)]) {
                Vector const lhs = A.multiply(l, A.basis_vector(c));
                Vector const bc  = to_dense(A.product(b, c), n);
                Vector const rhs =
                    t.apply(ti, A.multiply(A.basis_vector(a), t.apply(u1, bc)));
                if (lhs != rhs) {
                  t.assoc_witness_ = std::array<std::size_t, 6>{s, u1, u2, a, b, c};
                  break;
                }
              }
              if (t.assoc_witness_) {
                break;
              }
            }
            if (t.assoc_witness_) {
              break;
            }
          }
        }
      }
    }
    (void)ring;
    return t;
  }

  AlgebraAction AlgebraAction::trivial(InverseSemigroupoidRef actor, AlgebraRef algebra) {
    std::size_t const m = actor->base().num_arrows();
    std::size_t const n = algebra->rank();
    AlgebraActionData d;
    for (ArrowId s = 0; s < m; ++s) {
      d.domains.emplace_back();
      d.images.emplace_back();
      for (std::size_t k = 0; k < n; ++k) {
        d.domains.back().push_back(k);
        d.images.back().push_back(algebra->basis_vector(k));
      }
    }
    return validate(std::move(actor), std::move(algebra), std::move(d), "trivial").value();
  }

  bool AlgebraAction::supported_in(ArrowId s, Vector const& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0 && position_[s][i] == kNone) {
        return false;
      }
    }
    return true;
  }

  Vector AlgebraAction::apply(ArrowId s, Vector const& x) const {
    Ring const& ring = algebra_->ring();
    Vector      out(algebra_->rank());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        continue;
      }
      std::uint32_t const k = position_[s][i];
      if (k == kNone) {
        throw std::logic_error("Θ applied outside its domain");
      }
      Vector const& img = images_[s][k];
      for (std::size_t r = 0; r < out.size(); ++r) {
        ring.fma(out[r], x[i], img[r]);
      }
    }
    return out;
  }

  ValidationReport AlgebraAction::associativity_report() const {
    if (!assoc_witness_) {
      throw std::logic_error("associativity_report() on an associative action");
    }
    auto const&         w    = *assoc_witness_;
    Semigroupoid const& base = actor_->base();
    auto const& A = *algebra_;
    auto        s = [&](std::size_t i) { return base.arrow_name(static_cast<ArrowId>(i)); };
    return fail("associativity",
                "Θ_" + s(w[1]) + "*(a Θ_" + s(w[1]) + "(b)) c ≠ Θ_" + s(w[1]) + "*(a Θ_" + s(w[1])
                    + "(b c)) for a = " + A.label(w[3]) + ", b = " + A.label(w[4])
                    + ", c = " + A.label(w[5]),
                {s(w[0]), s(w[1]), s(w[2]), A.label(w[3]), A.label(w[4]), A.label(w[5])});
  }

  nlohmann::json AlgebraAction::to_json() const {
    Semigroupoid const&        base = actor_->base();
    AlgebraPresentation const& A    = *algebra_;
    nlohmann::json             j;
    j["id"]      = id_;
    j["actor"]   = base.id();
    j["algebra"] = A.provenance();
    j["theta"]   = nlohmann::json::object();
    for (ArrowId s = 0; s < base.num_arrows(); ++s) {
      nlohmann::json m = nlohmann::json::object();
      for (std::size_t k = 0; k < domains_[s].size(); ++k) {
        m[A.label(domains_[s][k])] = A.format(images_[s][k]);
      }
      j["theta"][base.arrow_name(s)] = m;
    }
    j["associative"] = is_associative();
    return j;
  }

  // ---------------------------------------------------------------------------

  namespace {
    //! Basis δ_s·e_d over the chosen per-arrow domains, product from `rule`,
    //! which returns the A-coordinates of the product at st.
    template <typename Rule>
    Checked<CrossedAlgebra> build_crossed(AlgebraAction const& theta,
                                          std::vector<ArrowId> const& domain_of,
                                          std::string provenance, Homomorphism const* grading,
                                          ExecPolicy policy, Rule&& rule) {
      Semigroupoid const&        S = theta.actor().base();
      AlgebraPresentation const& A = theta.algebra();
      CrossedAlgebra             out;
      out.algebra_rank = A.rank();
      out.index.assign(S.num_arrows() * A.rank(), kNone);
      std::vector<std::string> labels;
      for (ArrowId s = 0; s < S.num_arrows(); ++s) {
        for (std::size_t d : theta.dom(domain_of[s])) {
          out.index[s * A.rank() + d] = static_cast<std::uint32_t>(out.components.size());
          out.components.emplace_back(s, d);
          labels.push_back(delta_label(S.arrow_name(s), A.label(d)));
        }
      }
      std::optional<std::string> leak;
      auto sc = kernels::tabulate(
          out.components.size(),
          [&](std::size_t u, std::size_t v) {
            auto [s, a] = out.components[u];
            auto [t, b] = out.components[v];
            SparseVector r;
            if (!S.composable(s, t)) {
              return r;
            }
            ArrowId const st = S.prod(s, t);
            Vector const  x  = rule(s, a, t, b);
            for (std::size_t k = 0; k < x.size(); ++k) {
              if (x[k] == 0) {
                continue;
              }
              std::uint32_t const w = out.index[st * A.rank() + k];
              if (w == kNone) {
#if defined(SECTIONAL_HAVE_OPENMP)
#pragma omp critical(sectional_crossed_leak)
#endif
                if (!leak) {
                  leak = labels[u] + "·" + labels[v] + " leaves the fiber over "
                         + S.arrow_name(st);
                }
                continue;
              }
              r.emplace_back(w, x[k]);
            }
            std::sort(r.begin(), r.end(),
                      [](auto const& p, auto const& q) { return p.first < q.first; });
            return r;
          },
          policy);
      if (leak) {
        return fail("closure", *leak);
      }
      std::optional<Grading> gr;
      if (grading) {
        if (grading->source().num_arrows() != S.num_arrows()) {
          throw InputError("grading is not defined on the actor");
        }
        Grading g{grading->target_ref(), {}};
        for (auto [s, d] : out.components) {
          g.degree.push_back((*grading)(s));
          (void)d;
        }
        gr = std::move(g);
      }
      auto alg = AlgebraPresentation::validate(A.ring(), std::move(labels), std::move(sc),
                                               std::move(provenance), std::move(gr), policy);
      if (!alg) {
        return alg.report();
      }
      out.algebra = share(std::move(alg).value());
      return out;
    }
  }  // namespace

  Checked<CrossedAlgebra> naive_crossed_product(AlgebraAction const& theta,
                                                Homomorphism const* grading, ExecPolicy policy) {
    if (!theta.is_associative()) {
      return ValidationReport(theta.associativity_report()).in_stage("crossed");
    }
    InverseSemigroupoid const& S = theta.actor();
    AlgebraPresentation const& A = theta.algebra();
    std::vector<ArrowId>       domain_of(S.base().num_arrows());
    for (ArrowId s = 0; s < domain_of.size(); ++s) {
      domain_of[s] = s;
    }
    return build_crossed(theta, domain_of, S.base().id() + "⋆" + A.provenance(), grading, policy,
                         [&](ArrowId, std::size_t a, ArrowId t, std::size_t b) {
                           Vector const x = A.multiply(A.basis_vector(a), theta.image(t, b));
                           return theta.apply(S.inv(t), x);
                         });
  }

  Checked<CrossedAlgebra> lscript_algebra(AlgebraAction const& theta, ExecPolicy policy) {
    if (!theta.is_associative()) {
      return ValidationReport(theta.associativity_report()).in_stage("lscript");
    }
    InverseSemigroupoid const& S = theta.actor();
    AlgebraPresentation const& A = theta.algebra();
    std::vector<ArrowId>       domain_of(S.base().num_arrows());
    for (ArrowId s = 0; s < domain_of.size(); ++s) {
      domain_of[s] = S.inv(s);
    }
    return build_crossed(theta, domain_of, "ℒ(" + theta.id() + ")", nullptr, policy,
                         [&](ArrowId x, std::size_t a, ArrowId, std::size_t b) {
                           Vector const y = A.multiply(theta.image(S.inv(x), a),
                                                       A.basis_vector(b));
                           return theta.apply(x, y);
                         });
  }

  Checked<LscriptIso> lscript_iso(AlgebraAction const& theta, ExecPolicy policy) {
    auto crossed = naive_crossed_product(theta, nullptr, policy);
    if (!crossed) {
      return crossed.report();
    }
    auto ls = lscript_algebra(theta, policy);
    if (!ls) {
      return ls.report();
    }
    InverseSemigroupoid const& S = theta.actor();
    std::size_t const          n = theta.algebra().rank();
    LscriptIso                 out{std::move(crossed).value(), std::move(ls).value(), {}};
    out.phi.name    = "φ";
    out.phi.source  = out.crossed.algebra;
    out.phi.target  = out.lscript.algebra;
    out.phi.inverse = std::vector<SparseVector>{};
    // δ_s e_d ↦ δ_s Θ_s(e_d)
    for (auto [s, d] : out.crossed.components) {
      Vector const y = theta.image(s, d);
      SparseVector img;
      for (std::size_t k = 0; k < n; ++k) {
        if (y[k] != 0) {
          img.emplace_back(out.lscript.basis_of(s, k), y[k]);
        }
      }
      std::sort(img.begin(), img.end(), [](auto const& p, auto const& q) { return p.first < q.first; });
      out.phi.images.push_back(std::move(img));
    }
    // δ_s e_d ↦ δ_s Θ_{s*}(e_d)
    for (auto [s, d] : out.lscript.components) {
      Vector const y = theta.image(S.inv(s), d);
      SparseVector img;
      for (std::size_t k = 0; k < n; ++k) {
        if (y[k] != 0) {
          img.emplace_back(out.crossed.basis_of(s, k), y[k]);
        }
      }
      std::sort(img.begin(), img.end(), [](auto const& p, auto const& q) { return p.first < q.first; });
      out.phi.inverse->push_back(std::move(img));
    }
    return out;
  }

}  // namespace sectional
