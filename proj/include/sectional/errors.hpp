#ifndef SECTIONAL_ERRORS_HPP_
#define SECTIONAL_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sectional {

  // Malformed input: unknown ids, wrong shapes, dangling references.
  class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // The requested operation is not available for this ring or structure
  // (e.g. kernels over a general finite-table ring).
  class CapabilityError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // A self-check that cannot fail on a correct implementation did fail.
  class InternalError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
  };

  //! Outcome of a validator that rejected its input.
  //!
  //! `check` names the violated condition (e.g. "associativity"), `witness`
  //! holds the smallest failing tuple in id order, rendered with the
  //! user-facing names.
  struct ValidationReport {
    std::string              check;
    std::string              message;
    std::vector<std::string> witness;
    bool                     structural = false;
    std::string              stage;

    ValidationReport& in_stage(std::string s) {
      if (stage.empty()) {
        stage = std::move(s);
      } else {
        stage = std::move(s) + "/" + stage;
      }
      return *this;
    }

    nlohmann::json to_json() const {
      nlohmann::json j;
      j["check"]   = check;
      j["message"] = message;
      j["witness"] = witness;
      if (structural) {
        j["structural"] = true;
      }
      if (!stage.empty()) {
        j["stage"] = stage;
      }
      return j;
    }

    std::string to_string() const {
      std::string out = (stage.empty() ? "" : "[" + stage + "] ") + check;
      if (!message.empty()) {
        out += ": " + message;
      }
      if (!witness.empty()) {
        out += " (witness:";
        for (auto const& w : witness) {
          out += " " + w;
        }
        out += ")";
      }
      return out;
    }
  };

  inline ValidationReport fail(std::string check,
                               std::string message,
                               std::vector<std::string> witness = {}) {
    ValidationReport r;
    r.check   = std::move(check);
    r.message = std::move(message);
    r.witness = std::move(witness);
    return r;
  }

  inline ValidationReport structural_fail(std::string check,
                                          std::string message,
                                          std::vector<std::string> witness = {}) {
    auto r       = fail(std::move(check), std::move(message), std::move(witness));
    r.structural = true;
    return r;
  }

  //! Either a validated value or the report explaining why validation failed.
  template <typename T>
  class Checked {
   public:
    Checked(T value) : state_(std::move(value)) {}                   // NOLINT
    Checked(ValidationReport report) : state_(std::move(report)) {}  // NOLINT

    bool ok() const noexcept {
      return std::holds_alternative<T>(state_);
    }
    explicit operator bool() const noexcept {
      return ok();
    }

    T const& value() const& {
      if (!ok()) {
        throw InputError("validation failed: " + report().to_string());
      }
      return std::get<T>(state_);
    }
    T&& value() && {
      if (!ok()) {
        throw InputError("validation failed: " + report().to_string());
      }
      return std::get<T>(std::move(state_));
    }
    T const* operator->() const {
      return &value();
    }

    ValidationReport const& report() const {
      if (ok()) {
        throw std::logic_error("Checked::report() on a valid value");
      }
      return std::get<ValidationReport>(state_);
    }

   private:
    std::variant<T, ValidationReport> state_;
  };

}  // namespace sectional

#endif  // SECTIONAL_ERRORS_HPP_
