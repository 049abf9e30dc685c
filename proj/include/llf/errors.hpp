#pragma once
#include <stdexcept>
#include <string>

namespace llf {

// Computation error carrying a stable machine-readable kind, e.g.
// "admissibility-violation", "no-bracket", "plateau-not-flat".
// The CLI prints the kind verbatim on the diagnostic stream and exits 1.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

inline void require(bool cond, const char* kind, const std::string& what) {
    if (!cond) throw Error(kind, what);
}

} // namespace llf
