#ifndef PKS_REFERENCE_HPP
#define PKS_REFERENCE_HPP

#include "pks/field.hpp"

namespace pks::ref {

// Plain serial implementations of the data-parallel kernels, written
// independently of the OpenMP paths. Tests compare the two; the benchmark
// times them against each other.

double integrate(const Field& f);
FaceField gradient(const Field& f);
Field divergence(const FaceField& flux);
double tv_anisotropic(const Field& f);
double tv_isotropic(const Field& f);

}  // namespace pks::ref

#endif
