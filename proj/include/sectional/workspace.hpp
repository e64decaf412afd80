#ifndef SECTIONAL_WORKSPACE_HPP_
#define SECTIONAL_WORKSPACE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "theorems.hpp"

namespace sectional {

  //! Malformed structure file; the message carries line and column when the
  //! JSON itself is broken, or the missing id for dangling references.
  class ParseError : public InputError {
   public:
    using InputError::InputError;
  };

  struct Declaration {
    std::string    id;
    nlohmann::json body;
  };

  struct TaskSpec {
    std::size_t    index = 0;
    std::string    id;
    std::string    kind;    // validate | build | verify
    std::string    target;  // theorem or construction name; structure id for validate
    nlohmann::json params = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
  };

  //! Stanzas of a structure file after reference resolution. Semantic
  //! validation happens when a Workspace builds the declared objects.
  struct WorkspaceFile {
    nlohmann::json           ring;
    std::vector<Declaration> semigroupoids;
    std::vector<Declaration> inverse_semigroupoids;
    std::vector<Declaration> homomorphisms;
    std::vector<Declaration> actions;
    std::vector<Declaration> algebras;
    std::vector<Declaration> bundles;
    std::vector<Declaration> bundle_actions;
    std::vector<Declaration> congruences;
    std::vector<TaskSpec>    tasks;

    //! Stanza name ("semigroupoids", ...) of a declared id, if any.
    std::optional<std::string> kind_of(std::string const& id) const;
  };

  WorkspaceFile parse_workspace(std::string_view text);
  WorkspaceFile parse_workspace_file(std::string const& path);

  //! Builds and caches the declared structures on demand.
  class Workspace {
   public:
    explicit Workspace(WorkspaceFile file, std::optional<Ring> ring_override = std::nullopt,
                       ExecPolicy policy = default_policy());

    WorkspaceFile const& file() const noexcept {
      return file_;
    }
    Ring const& ring() const noexcept {
      return ring_;
    }
    ExecPolicy policy() const noexcept {
      return policy_;
    }

    Checked<SemigroupoidRef>                          semigroupoid(std::string const& id);
    //! An inverse_semigroupoids entry, or a semigroupoid with inverses inferred.
    Checked<InverseSemigroupoidRef>                   inverse(std::string const& id);
    Checked<std::shared_ptr<Homomorphism const>>      homomorphism(std::string const& id);
    Checked<LandPreactionRef>                         action(std::string const& id);
    Checked<AlgebraRef>                               algebra(std::string const& id);
    Checked<BundleRef>                                bundle(std::string const& id);
    Checked<std::shared_ptr<BundleAction const>>      bundle_action(std::string const& id);
    Checked<std::shared_ptr<BundleCongruence const>>  congruence(std::string const& id);

    //! Validates any declared structure by id.
    std::optional<ValidationReport> validate(std::string const& id);

   private:
    WorkspaceFile file_;
    Ring          ring_;
    ExecPolicy    policy_;

    std::map<std::string, Checked<SemigroupoidRef>>                         semigroupoids_;
    std::map<std::string, Checked<InverseSemigroupoidRef>>                  inverses_;
    std::map<std::string, Checked<std::shared_ptr<Homomorphism const>>>     homomorphisms_;
    std::map<std::string, Checked<LandPreactionRef>>                        actions_;
    std::map<std::string, Checked<AlgebraRef>>                              algebras_;
    std::map<std::string, Checked<BundleRef>>                               bundles_;
    std::map<std::string, Checked<std::shared_ptr<BundleAction const>>>     bundle_actions_;
    std::map<std::string, Checked<std::shared_ptr<BundleCongruence const>>> congruences_;
  };

  //! Algebra stanza in the structure-file format (inverse of Workspace::algebra).
  nlohmann::json algebra_to_json(AlgebraPresentation const& a, std::string const& id);

}  // namespace sectional

#endif  // SECTIONAL_WORKSPACE_HPP_
