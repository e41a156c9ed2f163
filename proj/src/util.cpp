#include "zsig/util.hpp"

#include <cstdio>

#include "zsig/error.hpp"

namespace zsig {

const char* errc_name(errc c) {
    switch (c) {
        case errc::zero_input: return "ZeroInput";
        case errc::not_prime: return "NotPrime";
        case errc::all_zero: return "AllZero";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::base_locus: return "BaseLocus";
        case errc::resource_limit: return "ResourceLimit";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::non_integral: return "NonIntegral";
        case errc::zero_term: return "ZeroTerm";
        case errc::on_divisor: return "OnDivisor";
        case errc::not_linear: return "NotLinear";
        case errc::degree_too_small: return "DegreeTooSmall";
        case errc::invalid_spec: return "InvalidSpec";
        case errc::parse_error: return "ParseError";
        case errc::io_error: return "IoError";
    }
    return "Unknown";
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace zsig
