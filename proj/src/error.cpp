#include "cheb/error.hpp"

namespace cheb {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::invalid_range: return "invalid range";
    case Errc::range_overflow: return "range overflow";
    case Errc::invalid_residue: return "invalid residue";
    case Errc::invalid_parameter: return "invalid parameter";
    case Errc::domain_error: return "domain error";
    case Errc::search_limit: return "search limit reached";
    case Errc::size_limit: return "size limit exceeded";
    case Errc::incompatible_variant: return "incompatible bound variant";
    case Errc::too_few_samples: return "too few samples";
    case Errc::out_of_range_sample: return "sample outside admissible range";
    case Errc::degenerate_fit: return "degenerate fit";
    case Errc::division_by_zero: return "division by zero";
    }
    return "unknown error";
}

}  // namespace cheb
