#ifndef QSW_REPORT_HPP
#define QSW_REPORT_HPP

// JSON and CSV renderings of solver results. Everything here is a pure
// function of its inputs (no clocks, no hostnames) so that reports are
// bitwise reproducible.

#include <string>
#include <vector>

#include "qsw/config.hpp"
#include "qsw/probes.hpp"
#include "qsw/solver.hpp"
#include "qsw/spectrum.hpp"
#include "qsw/transform.hpp"

namespace qsw {

/// Shortest decimal that round-trips ("%.17g"); "nan" / "inf" / "-inf" otherwise.
std::string format_number(double x);

/// node,v,u with node the grid coordinate (|x| on radial grids).
std::string profile_csv(const Grid& grid, const SolveReport& rep);
/// iter,phi,grad_norm,rho
std::string iterations_csv(const SolveReport& rep);
/// i,lambda,beta with i 1-based and beta = (lambda + m)^{-1/2}.
std::string spectrum_csv(const SpectralSplit& split, double shift);
/// t,f,f_prime,f_second
std::string transform_csv(const TransformTable& tr, const std::vector<double>& ts);

Json grid_json(const Grid& grid);
Json problem_json(const Problem& problem);
Json validation_json(const ValidationReport& rep);
Json property_json(const PropertyReport& rep);
Json spectrum_json(const SpectralSplit& split, double shift);
Json solve_json(const SolveReport& rep);
Json multiplicity_json(const MultiplicityReport& rep);
Json continuation_json(const std::vector<ContinuationPoint>& points);
Json probe_json(const LocalLinkingProbe& ll);
Json probe_json(const AntiCoercivityProbe& ac);
Json probe_json(const DescentProbe& dp);

}  // namespace qsw

#endif  // QSW_REPORT_HPP
