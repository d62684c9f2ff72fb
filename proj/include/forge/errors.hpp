#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace forge {

/**
 * Rejected input or an operation precondition failure. `kind` is a stable
 * machine-readable tag; `detail` carries the witness (offending ids, indices,
 * values) and is merged into the CLI error object verbatim.
 */
class DomainError : public std::runtime_error {
public:
    DomainError(std::string kind, const std::string& message,
                nlohmann::json detail = nlohmann::json::object())
        : std::runtime_error(message), kind_(std::move(kind)), detail_(std::move(detail)) {}

    const std::string& kind() const { return kind_; }
    const nlohmann::json& detail() const { return detail_; }

private:
    std::string kind_;
    nlohmann::json detail_;
};

/** A size or node budget ran out before the operation could finish. */
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(const std::string& message, nlohmann::json report)
        : std::runtime_error(message), report_(std::move(report)) {}

    const nlohmann::json& report() const { return report_; }

private:
    nlohmann::json report_;
};

}  // namespace forge
