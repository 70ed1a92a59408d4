#ifndef NCINTERP_RANDOM_HPP
#define NCINTERP_RANDOM_HPP

#include "ncinterp/core.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace ncinterp {

using Rng = std::mt19937_64;

// Instance families. Gaussian: i.i.d. standard complex normal entries
// (real and imaginary parts N(0, 1/2)). Psd: G G^* / d for Gaussian G.
// Unitary: Q factor of a Gaussian matrix with the phases of diag(R) removed.
enum class Family { gaussian, psd, unitary };

Family parse_family(const std::string& name);
std::string to_string(Family f);

ComplexMatrix random_gaussian(Rng& rng, std::size_t d);
ComplexMatrix random_psd(Rng& rng, std::size_t d);
ComplexMatrix random_unitary(Rng& rng, std::size_t d);
ComplexMatrix random_matrix(Rng& rng, std::size_t d, Family family);

MatrixTuple random_tuple(Rng& rng, std::size_t d, std::size_t n, Family family = Family::gaussian);

/// Uniform complex scalar with modulus in [0.1, 3).
Complex random_scalar(Rng& rng);

}  // namespace ncinterp

#endif  // NCINTERP_RANDOM_HPP
