#pragma once

#include <stdexcept>
#include <string>

namespace idemfac {

enum class errc {
    not_square_free,
    degenerate_d,
    not_in_ring,
    not_divisible,
    context_mismatch,
    imaginary_ring,
    not_prime,
    invalid_setting,
    norm_not_divisible,
    norm_mismatch,
    odd_prime_required,
    not_a_unit,
    degenerate_form,
    malformed_input,
};

inline const char* errc_name(errc c) noexcept
{
    switch (c) {
    case errc::not_square_free: return "NotSquareFree";
    case errc::degenerate_d: return "DegenerateD";
    case errc::not_in_ring: return "NotInRing";
    case errc::not_divisible: return "NotDivisible";
    case errc::context_mismatch: return "ContextMismatch";
    case errc::imaginary_ring: return "ImaginaryRing";
    case errc::not_prime: return "NotPrime";
    case errc::invalid_setting: return "InvalidSetting";
    case errc::norm_not_divisible: return "NormNotDivisible";
    case errc::norm_mismatch: return "NormMismatch";
    case errc::odd_prime_required: return "OddPrimeRequired";
    case errc::not_a_unit: return "NotAUnit";
    case errc::degenerate_form: return "DegenerateForm";
    case errc::malformed_input: return "MalformedInput";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace idemfac
