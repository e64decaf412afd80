#include <array>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sectional/runner.hpp"
#include "support.hpp"

using namespace sectional;
using nlohmann::json;

namespace {

  std::string fixture(std::string const& name) {
    return std::string(SECTIONAL_FIXTURES_DIR) + "/" + name;
  }

  struct Outcome {
    bool        ok = true;
    std::string detail;

    void require(bool cond, std::string const& what) {
      if (!cond && ok) {
        ok     = false;
        detail = what;
      }
    }
  };

  RunOptions quiet() {
    RunOptions o;
    o.timestamp = false;
    return o;
  }

  json tasks_of(std::string const& file) {
    auto r = run_files({fixture(file)}, quiet());
    return r.report["inputs"][0]["tasks"];
  }

  bool cert_flag(json const& task, std::string const& map, std::string const& key) {
    for (json const& c : task["certificates"]) {
      if (c["map"] == map) {
        return c.value(key, false) && c["passed"] == true;
      }
    }
    return false;
  }

  Outcome axiom_validators() {
    Outcome o;
    for (auto const& s : testing::corpus()) {
      o.require(Semigroupoid::validate(s.tables()).ok(), s.id() + " rejected");
    }
    auto const ps = testing::perturbations(10);
    o.require(ps.size() == 10, "fewer than 10 perturbations");
    for (auto const& p : ps) {
      auto r = Semigroupoid::validate(p.tables);
      o.require(!r.ok(), p.name + " accepted");
      if (!r.ok()) {
        o.require(r.report().check == p.expected.check && r.report().witness == p.expected.witness,
                  p.name + ": wrong witness");
      }
    }
    o.detail = o.ok ? "5 structures valid, 10 perturbations rejected with oracle witnesses"
                    : o.detail;
    return o;
  }

  Outcome convolution() {
    Outcome o;
    for (Ring const& ring : {Ring::integers_mod(4), Ring::rationals()}) {
      BundleRef       b = share(Bundle::trivial(ring, share(catalog::pair_groupoid(2))));
      std::mt19937_64 gen(7);
      for (int i = 0; i < 200; ++i) {
        Section const x = Section::random(b, gen), y = Section::random(b, gen),
                      z = Section::random(b, gen);
        o.require(convolve(convolve(x, y), z) == convolve(x, convolve(y, z)),
                  ring.describe() + ": triple " + std::to_string(i));
      }
    }
    o.detail = o.ok ? "200 triples over Z/4 and Q" : o.detail;
    return o;
  }

  Outcome graded_roundtrip() {
    Outcome o;
    for (AlgebraRef a : {testing::group_algebra_z2(Ring::rationals()),
                         testing::matrix_units(Ring::rationals())}) {
      CertifyOptions opt;
      opt.inverse_multiplicative = true;
      opt.degrees                = true;
      Certificate const c        = certify(graded_roundtrip_iso(a), opt);
      o.require(c.passed() && c.inverse_composites.value_or(false) && c.degrees.value_or(false),
                a->provenance());
    }
    o.detail = o.ok ? "R[Z2] and M2 over P2" : o.detail;
    return o;
  }

  Outcome tensor() {
    Outcome    o;
    json const ts = tasks_of("tensor.json");
    o.require(ts.size() == 3, "expected three instances");
    std::ostringstream ranks;
    for (json const& t : ts) {
      json const& r = t["ranks"];
      o.require(t["status"] == "pass", t["id"].get<std::string>());
      o.require(cert_flag(t, "T", "multiplicative") && cert_flag(t, "T", "bijective_linear"),
                t["id"].get<std::string>() + ": certificate");
      o.require(r["target"] == r["sectional"].get<int>() * r["semigroupoid_algebra"].get<int>(),
                t["id"].get<std::string>() + ": rank identity");
      ranks << " " << r["sectional"] << "*" << r["semigroupoid_algebra"] << "=" << r["target"];
    }
    o.detail = o.ok ? "ranks" + ranks.str() : o.detail;
    return o;
  }

  Outcome crossed() {
    Outcome    o;
    json const ts = tasks_of("crossed.json");
    int        n  = 0;
    for (json const& t : ts) {
      if (t["kind"] != "verify") {
        continue;
      }
      ++n;
      std::string const id = t["id"];
      o.require(t["status"] == "pass", id);
      o.require(cert_flag(t, "Ψ", "inverse_composites") && cert_flag(t, "Ψ", "multiplicative"),
                id + ": Ψ");
      o.require(cert_flag(t, "φ", "inverse_composites") && cert_flag(t, "φ", "multiplicative"),
                id + ": φ");
    }
    o.require(n == 3, "expected three instances");
    o.detail = o.ok ? "Ψ and φ certified on 3 instances" : o.detail;
    return o;
  }

  Outcome smash() {
    Outcome         o;
    Ring const      q  = Ring::rationals();
    SemigroupoidRef z2 = share(catalog::cyclic_group(2));
    auto            s  = smash_theorem(share(Bundle::trivial(q, z2)), Homomorphism::identity(z2));
    o.require(s.ok(), "smash_theorem refused");
    if (s.ok()) {
      o.require(s->smash.algebra->rank() == 4 && s->target->rank() == 4, "ranks");
      CertifyOptions opt;
      opt.degrees = true;
      o.require(certify(s->t, opt).passed() && s->report.passed(), "graded isomorphism");
      o.require(find_isomorphism(*s->skew.semigroupoid, catalog::pair_groupoid(2)).has_value(),
                "skew product not isomorphic to P2");
    }
    o.detail = o.ok ? "ranks 4 and 4, skew product ≅ P2" : o.detail;
    return o;
  }

  Outcome quotient() {
    Outcome o;
    int     n = 0;
    for (char const* file : {"quotient_q.json", "quotient_z5.json"}) {
      for (json const& t : tasks_of(file)) {
        if (t["kind"] != "verify") {
          continue;
        }
        ++n;
        std::string const id = std::string(file) + ":" + t["id"].get<std::string>();
        o.require(t["status"] == "pass", id);
        o.require(t["checks"]["surjective"] == true, id + ": surjective");
        o.require(t["checks"]["span_equals_kernel"] == true
                      && t["ranks"]["kernel"] == t["ranks"]["generator_span"],
                  id + ": kernel");
      }
    }
    o.detail = o.ok ? std::to_string(n) + " congruences over Q and Z/5" : o.detail;
    return o;
  }

  Outcome germ() {
    Outcome     o;
    json const  t = tasks_of("germ.json")[0];
    json const& r = t["ranks"];
    o.require(t["status"] == "pass", "status");
    o.require(r["crossed"] == 3 && r["ideal"] == 1 && r["quotient"] == 2 && r["germ_algebra"] == 2,
              "ranks " + r.dump());
    o.require(cert_flag(t, "T", "multiplicative"), "induced map");
    o.detail = o.ok ? "ranks 3/1/2, germ algebra 2" : o.detail;
    return o;
  }

  std::pair<std::string, int> capture(std::string const& cmd) {
    std::string out;
    FILE*       p = popen(cmd.c_str(), "r");
    if (p == nullptr) {
      return {"", -1};
    }
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) {
      out.append(buf.data(), n);
    }
    int const status = pclose(p);
    return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
  }

  Outcome determinism() {
    Outcome     o;
    std::string cmd = std::string("\"") + SECTIONAL_CLI + "\" verify all --seed 7 --no-timestamp";
    std::vector<std::string> files;
    for (auto const& e : std::filesystem::directory_iterator(SECTIONAL_FIXTURES_DIR)) {
      if (e.path().extension() == ".json") {
        files.push_back(e.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    for (auto const& f : files) {
      cmd += " --input \"" + f + "\"";
    }
    auto const a = capture(cmd);
    auto const b = capture(cmd);
    o.require(a.second == 0 && b.second == 0, "exit codes " + std::to_string(a.second) + ", "
                                                  + std::to_string(b.second));
    o.require(!a.first.empty() && a.first == b.first, "reports differ");
    o.detail = o.ok ? std::to_string(files.size()) + " files, " + std::to_string(a.first.size())
                          + " identical bytes"
                    : o.detail;
    return o;
  }

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> const criteria = {
      {"axiom validators", axiom_validators},
      {"convolution associativity", convolution},
      {"graded/bundle round trip", graded_roundtrip},
      {"tensor theorem", tensor},
      {"crossed-product theorem", crossed},
      {"smash theorem", smash},
      {"quotient theorem", quotient},
      {"germ corollary", germ},
      {"cli determinism", determinism},
  };
  int failed = 0;
  int i      = 0;
  for (auto const& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (std::exception const& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << ++i << ". " << name << ": " << o.detail
              << "\n";
  }
  return failed == 0 ? 0 : 1;
}
