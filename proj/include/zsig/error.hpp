#ifndef ZSIG_ERROR_HPP
#define ZSIG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace zsig {

enum class errc {
    zero_input,
    not_prime,
    all_zero,
    dimension_mismatch,
    base_locus,
    resource_limit,
    index_out_of_range,
    non_integral,
    zero_term,
    on_divisor,
    not_linear,
    degree_too_small,
    invalid_spec,
    parse_error,
    io_error,
};

const char* errc_name(errc c);

/// Library-wide exception; code() distinguishes the failure kind.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

} // namespace zsig

#endif
