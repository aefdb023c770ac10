#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cheb {

enum class Errc {
    invalid_range,
    range_overflow,
    invalid_residue,
    invalid_parameter,
    domain_error,
    search_limit,
    size_limit,
    incompatible_variant,
    too_few_samples,
    out_of_range_sample,
    degenerate_fit,
    division_by_zero,
};

std::string_view to_string(Errc code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace cheb
