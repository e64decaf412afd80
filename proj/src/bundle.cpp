#include "sectional/bundle.hpp"

#include <algorithm>

namespace sectional {

  namespace {
    std::string pair_key(Semigroupoid const& s, ArrowId a, ArrowId b) {
      return s.arrow_name(a) + "," + s.arrow_name(b);
    }

    bool is_central(Ring const& ring, Scalar const& t) {
      if (ring.is_commutative()) {
        return true;
      }
      for (std::size_t x = 0; x < ring.table_size(); ++x) {
        if (ring.mul(t, Scalar(x)) != ring.mul(Scalar(x), t)) {
          return false;
        }
      }
      return true;
    }

    Scalar random_scalar(Ring const& ring, std::mt19937_64& gen) {
      switch (ring.kind()) {
        case RingKind::integers:
          return Scalar(static_cast<long>(gen() % 7) - 3);
        case RingKind::rationals: {
          long const p = static_cast<long>(gen() % 7) - 3;
          long const q = static_cast<long>(gen() % 3) + 1;
          return Scalar(p) / q;
        }
        case RingKind::integers_mod:
          return ring.from_int(static_cast<long>(gen() % 1000));
        case RingKind::table:
          return Scalar(static_cast<long>(gen() % ring.table_size()));
      }
      return Scalar(0);
    }
  }  // namespace

  Checked<Bundle> Bundle::validate(Ring ring, SemigroupoidRef base, BundleData data,
                                   ExecPolicy policy) {
    (void)policy;
    Semigroupoid const& G = *base;
    std::size_t const   n = G.num_arrows();
    if (data.ranks.size() != n) {
      return structural_fail("structure", "fiber ranks do not cover every base arrow");
    }
    if (!data.fiber_labels.empty() && data.fiber_labels.size() != n) {
      return structural_fail("structure", "fiber labels do not cover every base arrow");
    }
    for (ArrowId g = 0; g < n && !data.fiber_labels.empty(); ++g) {
      if (data.fiber_labels[g].size() != data.ranks[g]) {
        return structural_fail("structure", "fiber labels over " + G.arrow_name(g)
                                                + " do not match its rank");
      }
    }
    if (data.mode == BundleMode::structure_constants && !ring.is_commutative()) {
      throw CapabilityError("structure-constants bundles need a commutative ring; "
                            + ring.describe() + " is not");
    }

    Bundle b;
    b.id_    = std::move(data.id);
    b.ring_  = ring;
    b.base_  = base;
    b.mode_  = data.mode;
    b.ranks_ = data.ranks;
    b.offsets_.assign(n + 1, 0);
    for (ArrowId g = 0; g < n; ++g) {
      b.offsets_[g + 1] = b.offsets_[g] + b.ranks_[g];
    }
    b.labels_.resize(n);
    for (ArrowId g = 0; g < n; ++g) {
      if (!data.fiber_labels.empty()) {
        b.labels_[g] = data.fiber_labels[g];
      } else if (b.ranks_[g] == 1) {
        b.labels_[g] = {"1"};
      } else {
        for (std::size_t i = 0; i < b.ranks_[g]; ++i) {
          b.labels_[g].push_back("e" + std::to_string(i));
        }
      }
    }

    for (auto const& [key, c] : data.constants) {
      auto [x, y] = key;
      if (x >= n || y >= n) {
        return structural_fail("structure", "constants refer to an unknown arrow");
      }
      if (!G.composable(x, y)) {
        return structural_fail("structure",
                               "constants given for the non-composable pair " + pair_key(G, x, y),
                               {G.arrow_name(x), G.arrow_name(y)});
      }
    }
    for (auto const& [key, t] : data.twist) {
      auto [x, y] = key;
      if (x >= n || y >= n || !G.composable(x, y)) {
        return structural_fail("structure", "twist given for a non-composable pair");
      }
    }

    if (data.mode == BundleMode::ring_fiber) {
      for (ArrowId g = 0; g < n; ++g) {
        if (b.ranks_[g] != 1) {
          return structural_fail("structure", "ring-fiber mode needs rank-1 fibers; "
                                                  + G.arrow_name(g) + " has rank "
                                                  + std::to_string(b.ranks_[g]),
                                 {G.arrow_name(g)});
        }
      }
      if (!data.constants.empty()) {
        return structural_fail("structure", "ring-fiber mode takes twists, not constants");
      }
    }

    b.pair_index_.assign(n * n, kNone);
    for (auto [x, y] : G.composable_pairs()) {
      std::size_t const kx = b.ranks_[x], ky = b.ranks_[y], kxy = b.ranks_[G.prod(x, y)];
      PairConstants     c(kx, std::vector<Vector>(ky, Vector(kxy)));
      if (data.mode == BundleMode::ring_fiber) {
        auto it    = data.twist.find({x, y});
        c[0][0][0] = it == data.twist.end() ? ring.one() : it->second;
        if (!is_central(ring, c[0][0][0])) {
          return fail("twist-central",
                      "twist " + ring.to_string(c[0][0][0]) + " on " + pair_key(G, x, y)
                          + " is not central",
                      {G.arrow_name(x), G.arrow_name(y)});
        }
      } else if (auto it = data.constants.find({x, y}); it != data.constants.end()) {
        PairConstants const& given = it->second;
        bool                 ok    = given.size() == kx;
        for (std::size_t i = 0; ok && i < kx; ++i) {
          ok = given[i].size() == ky;
          for (std::size_t j = 0; ok && j < ky; ++j) {
            ok = given[i][j].size() == kxy;
          }
        }
        if (!ok) {
          return structural_fail("rank-mismatch",
                                 "constants on " + pair_key(G, x, y) + " are not "
                                     + std::to_string(kx) + "x" + std::to_string(ky) + "x"
                                     + std::to_string(kxy),
                                 {G.arrow_name(x), G.arrow_name(y)});
        }
        c = given;
      }
      b.pair_index_[x * n + y] = static_cast<std::uint32_t>(b.constants_.size());
      b.constants_.push_back(std::move(c));
    }

    // associativity of the total product, coordinatewise
    for (ArrowId x = 0; x < n; ++x) {
      for (ArrowId y = 0; y < n; ++y) {
        if (!G.composable(x, y)) {
          continue;
        }
        ArrowId const xy = G.prod(x, y);
        for (ArrowId z = 0; z < n; ++z) {
          if (!G.composable(y, z)) {
            continue;
          }
          ArrowId const     yz  = G.prod(y, z);
          std::size_t const out = b.ranks_[G.prod(xy, z)];
          for (std::size_t i = 0; i < b.ranks_[x]; ++i) {
            for (std::size_t j = 0; j < b.ranks_[y]; ++j) {
              for (std::size_t l = 0; l < b.ranks_[z]; ++l) {
                Vector        lhs(out), rhs(out);
                Vector const& ij = b.mu(x, y, i, j);
                for (std::size_t p = 0; p < ij.size(); ++p) {
                  if (ij[p] == 0) {
                    continue;
                  }
                  Vector const& pl = b.mu(xy, z, p, l);
                  for (std::size_t r = 0; r < out; ++r) {
                    ring.fma(lhs[r], ij[p], pl[r]);
                  }
                }
                Vector const& jl = b.mu(y, z, j, l);
                for (std::size_t q = 0; q < jl.size(); ++q) {
                  if (jl[q] == 0) {
                    continue;
                  }
                  Vector const& iq = b.mu(x, yz, i, q);
                  for (std::size_t r = 0; r < out; ++r) {
                    ring.fma(rhs[r], jl[q], iq[r]);
                  }
                }
                if (lhs != rhs) {
                  return fail("associativity",
                              "(e" + std::to_string(i) + "·e" + std::to_string(j) + ")·e"
                                  + std::to_string(l) + " ≠ e" + std::to_string(i) + "·(e"
                                  + std::to_string(j) + "·e" + std::to_string(l) + ") over ("
                                  + G.arrow_name(x) + ", " + G.arrow_name(y) + ", "
                                  + G.arrow_name(z) + ")",
                              {G.arrow_name(x), G.arrow_name(y), G.arrow_name(z)});
                }
              }
            }
          }
        }
      }
    }
    return b;
  }

  Bundle Bundle::trivial(Ring ring, SemigroupoidRef base) {
    BundleData d;
    d.id    = "R×" + base->id();
    d.ranks.assign(base->num_arrows(), 1);
    d.mode = BundleMode::ring_fiber;
    return validate(std::move(ring), std::move(base), std::move(d)).value();
  }

  std::pair<ArrowId, std::size_t> Bundle::locate(std::size_t k) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), k);
    auto g  = static_cast<ArrowId>(it - offsets_.begin() - 1);
    return {g, k - offsets_[g]};
  }

  Vector const& Bundle::mu(ArrowId a, ArrowId b, std::size_t i, std::size_t j) const {
    std::uint32_t const slot = pair_index_[a * base_->num_arrows() + b];
    if (slot == kNone) {
      throw std::logic_error("fiber product over a non-composable pair");
    }
    return constants_[slot][i][j];
  }

  Vector Bundle::fiber_product(ArrowId a, ArrowId b, Vector const& x, Vector const& y) const {
    Vector out(ranks_[base_->prod(a, b)]);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        continue;
      }
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] == 0) {
          continue;
        }
        Scalar const  xy = ring_.mul(x[i], y[j]);
        Vector const& c  = mu(a, b, i, j);
        for (std::size_t r = 0; r < out.size(); ++r) {
          ring_.fma(out[r], xy, c[r]);
        }
      }
    }
    return out;
  }

  nlohmann::json Bundle::to_json() const {
    Semigroupoid const& G = *base_;
    nlohmann::json      j;
    j["id"]    = id_;
    j["base"]  = G.id();
    j["mode"]  = mode_ == BundleMode::ring_fiber ? "ringfiber" : "sc";
    j["ranks"] = nlohmann::json::object();
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
      j["ranks"][G.arrow_name(g)] = ranks_[g];
    }
    if (mode_ == BundleMode::ring_fiber) {
      j["twist"] = nlohmann::json::object();
      for (auto [x, y] : G.composable_pairs()) {
        Scalar const& t = mu(x, y, 0, 0)[0];
        if (t != ring_.one()) {
          j["twist"][pair_key(G, x, y)] = ring_.scalar_to_json(t);
        }
      }
    } else {
      j["constants"] = nlohmann::json::object();
      for (auto [x, y] : G.composable_pairs()) {
        PairConstants const& c   = constants_[pair_index_[x * G.num_arrows() + y]];
        bool                 any = false;
        nlohmann::json       cj  = nlohmann::json::array();
        for (auto const& row : c) {
          nlohmann::json rj = nlohmann::json::array();
          for (auto const& v : row) {
            nlohmann::json vj = nlohmann::json::array();
            for (auto const& s : v) {
              any = any || s != 0;
              vj.push_back(ring_.scalar_to_json(s));
            }
            rj.push_back(vj);
          }
          cj.push_back(rj);
        }
        if (any) {
          j["constants"][pair_key(G, x, y)] = cj;
        }
      }
    }
    return j;
  }

  // ---------------------------------------------------------------------------

  Vector Section::at(ArrowId g) const {
    auto it = values_.find(g);
    return it == values_.end() ? Vector(bundle_->rank(g)) : it->second;
  }

  void Section::set(ArrowId g, Vector v) {
    if (v.size() != bundle_->rank(g)) {
      throw InputError("section value over " + bundle_->base().arrow_name(g)
                       + " has the wrong length");
    }
    if (is_zero_vector(v)) {
      values_.erase(g);
    } else {
      values_[g] = std::move(v);
    }
  }

  Vector Section::to_vector() const {
    Vector out(bundle_->total_rank());
    for (auto const& [g, v] : values_) {
      std::copy(v.begin(), v.end(), out.begin() + static_cast<long>(bundle_->offset(g)));
    }
    return out;
  }

  Section Section::from_vector(BundleRef bundle, Vector const& v) {
    Section s(bundle);
    for (ArrowId g = 0; g < bundle->base().num_arrows(); ++g) {
      auto first = v.begin() + static_cast<long>(bundle->offset(g));
      s.set(g, Vector(first, first + static_cast<long>(bundle->rank(g))));
    }
    return s;
  }

  Section Section::random(BundleRef bundle, std::mt19937_64& gen, double density) {
    Section                                s(bundle);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (ArrowId g = 0; g < bundle->base().num_arrows(); ++g) {
      if (coin(gen) >= density) {
        continue;
      }
      Vector v(bundle->rank(g));
      for (auto& x : v) {
        x = random_scalar(bundle->ring(), gen);
      }
      s.set(g, std::move(v));
    }
    return s;
  }

  Section convolve(Section const& alpha, Section const& beta) {
    if (alpha.bundle() != beta.bundle()) {
      throw InputError("convolution of sections of different bundles");
    }
    Bundle const&       b = *alpha.bundle();
    Semigroupoid const& G = b.base();
    Ring const&         r = b.ring();
    std::map<ArrowId, Vector> acc;
    for (auto const& [x, v] : alpha.values()) {
      for (auto const& [y, w] : beta.values()) {
        if (!G.composable(x, y)) {
          continue;
        }
        ArrowId const xy = G.prod(x, y);
        Vector const  p  = b.fiber_product(x, y, v, w);
        auto [it, fresh] = acc.try_emplace(xy, Vector(b.rank(xy)));
        (void)fresh;
        for (std::size_t k = 0; k < p.size(); ++k) {
          it->second[k] = r.add(it->second[k], p[k]);
        }
      }
    }
    Section out(alpha.bundle());
    for (auto& [g, v] : acc) {
      out.set(g, std::move(v));
    }
    return out;
  }

  std::string delta_label(std::string const& arrow, std::string const& label) {
    return label == "1" ? "δ" + arrow : "δ" + arrow + "·" + label;
  }

  std::string section_label(Bundle const& b, ArrowId g, std::size_t i) {
    return delta_label(b.base().arrow_name(g), b.fiber_label(g, i));
  }

  StructureConstants sectional_constants(Bundle const& b, ExecPolicy policy) {
    Semigroupoid const& G = b.base();
    return kernels::tabulate(
        b.total_rank(),
        [&](std::size_t u, std::size_t v) {
          auto [x, i] = b.locate(u);
          auto [y, j] = b.locate(v);
          SparseVector out;
          if (!G.composable(x, y)) {
            return out;
          }
          ArrowId const xy  = G.prod(x, y);
          Vector const& c   = b.mu(x, y, i, j);
          std::size_t const off = b.offset(xy);
          for (std::size_t p = 0; p < c.size(); ++p) {
            if (c[p] != 0) {
              out.emplace_back(static_cast<std::uint32_t>(off + p), c[p]);
            }
          }
          return out;
        },
        policy);
  }

  AlgebraPresentation sectional_algebra(Bundle const& b, Homomorphism const* grading,
                                        ExecPolicy policy) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < b.total_rank(); ++k) {
      auto [g, i] = b.locate(k);
      labels.push_back(section_label(b, g, i));
    }
    std::optional<Grading> gr;
    if (grading) {
      if (grading->source().num_arrows() != b.base().num_arrows()) {
        throw InputError("grading is not defined on the bundle's base");
      }
      Grading g{grading->target_ref(), {}};
      for (std::size_t k = 0; k < b.total_rank(); ++k) {
        g.degree.push_back((*grading)(b.locate(k).first));
      }
      gr = std::move(g);
    }
    auto a = AlgebraPresentation::validate(b.ring(), std::move(labels),
                                           sectional_constants(b, policy), "A(" + b.id() + ")",
                                           std::move(gr), policy);
    if (!a) {
      throw InternalError("sectional algebra of a valid bundle failed validation: "
                          + a.report().to_string());
    }
    return std::move(a).value();
  }

  GradedBundle bundle_from_graded(AlgebraPresentation const& a) {
    Grading const&      gr = a.grading();
    Semigroupoid const& G  = *gr.by;
    std::size_t const   n  = G.num_arrows();
    std::vector<std::vector<std::size_t>> comp(n);
    for (std::size_t k = 0; k < a.rank(); ++k) {
      comp[gr.degree[k]].push_back(k);
    }
    std::vector<std::size_t> pos(a.rank());
    for (auto const& c : comp) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        pos[c[i]] = i;
      }
    }
    BundleData d;
    d.id = "η(" + a.provenance() + ")";
    d.fiber_labels.resize(n);
    for (ArrowId g = 0; g < n; ++g) {
      d.ranks.push_back(comp[g].size());
      for (std::size_t k : comp[g]) {
        d.fiber_labels[g].push_back(a.label(k));
      }
    }
    Ring const& ring = a.ring();
    if (ring.is_commutative()) {
      d.mode = BundleMode::structure_constants;
      for (auto [g, h] : G.composable_pairs()) {
        ArrowId const gh = G.prod(g, h);
        PairConstants c(comp[g].size(),
                        std::vector<Vector>(comp[h].size(), Vector(comp[gh].size())));
        bool          any = false;
        for (std::size_t i = 0; i < comp[g].size(); ++i) {
          for (std::size_t j = 0; j < comp[h].size(); ++j) {
            for (auto const& [w, x] : a.product(comp[g][i], comp[h][j])) {
              c[i][j][pos[w]] = x;
              any             = true;
            }
          }
        }
        if (any) {
          d.constants.emplace(std::make_pair(g, h), std::move(c));
        }
      }
    } else {
      d.mode = BundleMode::ring_fiber;
      for (ArrowId g = 0; g < n; ++g) {
        if (comp[g].size() != 1) {
          throw CapabilityError("a graded algebra over a non-commutative ring becomes a bundle "
                                "only when every component has rank 1");
        }
      }
      for (auto [g, h] : G.composable_pairs()) {
        SparseVector const& p = a.product(comp[g][0], comp[h][0]);
        d.twist.emplace(std::make_pair(g, h), p.empty() ? Scalar(0) : p.front().second);
      }
    }
    auto b = Bundle::validate(ring, gr.by, std::move(d));
    if (!b) {
      throw InternalError("bundle of a graded algebra failed validation: "
                          + b.report().to_string());
    }
    GradedBundle out{std::move(b).value(), {}};
    for (ArrowId g = 0; g < n; ++g) {
      for (std::size_t k : comp[g]) {
        out.to_algebra.push_back(k);
      }
    }
    return out;
  }

  LinearMapOnBasis graded_roundtrip_iso(AlgebraRef a) {
    GradedBundle       gb = bundle_from_graded(*a);
    Homomorphism const id = Homomorphism::identity(a->grading().by);
    AlgebraRef         src = share(sectional_algebra(gb.bundle, &id));
    LinearMapOnBasis   f{"roundtrip", src, a, {}, std::vector<SparseVector>(a->rank())};
    Ring const&        ring = a->ring();
    for (std::size_t k = 0; k < gb.to_algebra.size(); ++k) {
      f.images.push_back({{static_cast<std::uint32_t>(gb.to_algebra[k]), ring.one()}});
      (*f.inverse)[gb.to_algebra[k]] = {{static_cast<std::uint32_t>(k), ring.one()}};
    }
    return f;
  }

  Bundle product_bundle(AlgebraPresentation const& a, SemigroupoidRef gamma) {
    Semigroupoid const& G = *gamma;
    Ring const&         r = a.ring();
    std::size_t const   m = a.rank();
    BundleData          d;
    d.id = a.provenance() + "×" + G.id();
    d.ranks.assign(G.num_arrows(), m);
    d.fiber_labels.assign(G.num_arrows(), a.labels());
    if (!r.is_commutative() && m == 1) {
      d.mode                      = BundleMode::ring_fiber;
      d.fiber_labels              = {};
      SparseVector const& p       = a.product(0, 0);
      Scalar const        t       = p.empty() ? Scalar(0) : p.front().second;
      for (auto [x, y] : G.composable_pairs()) {
        d.twist.emplace(std::make_pair(x, y), t);
      }
    } else {
      PairConstants c(m, std::vector<Vector>(m, Vector(m)));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          c[i][j] = to_dense(a.product(i, j), m);
        }
      }
      for (auto [x, y] : G.composable_pairs()) {
        d.constants.emplace(std::make_pair(x, y), c);
      }
    }
    auto b = Bundle::validate(r, std::move(gamma), std::move(d));
    if (!b) {
      throw InternalError("product bundle failed validation: " + b.report().to_string());
    }
    return std::move(b).value();
  }

  AlgebraPresentation semigroupoid_algebra(Ring const& ring, SemigroupoidRef gamma) {
    return sectional_algebra(Bundle::trivial(ring, std::move(gamma)));
  }

  AlgebraPresentation semigroupoid_algebra(AlgebraPresentation const& a, SemigroupoidRef gamma) {
    return sectional_algebra(product_bundle(a, std::move(gamma)));
  }

}  // namespace sectional
