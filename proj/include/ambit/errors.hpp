#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ambit {

// Input outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical routine failed to converge or produced an unusable result.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid scenario / grid configuration. Carries every violation found.
class config_error : public std::runtime_error {
public:
    explicit config_error(std::vector<std::string> violations);
    explicit config_error(const std::string& violation)
        : config_error(std::vector<std::string>{violation}) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace ambit
