#pragma once

#include <string>

#include "orlicz/conjugate.hpp"
#include "orlicz/nfunction.hpp"
#include "orlicz/orlicz_space.hpp"
#include "orlicz/potential.hpp"
#include "orlicz/solver.hpp"

namespace orlicz {

// JSON object schemas. Parse errors throw std::runtime_error carrying a
// line/column position.

NFunction nfunction_from_json(const std::string& text);
std::string nfunction_to_json(const NFunction& f);

/// Potential objects never embed the period; pass the problem's.
Potential potential_from_json(const std::string& text, double period);

ProblemSpec problem_from_json(const std::string& text);

std::string solve_report_to_json(const SolveReport& rep, const ProblemSpec& spec);
std::string certify_report_to_json(const CertifyReport& rep, const ProblemSpec& spec);
std::string refine_report_to_json(const RefineReport& rep);
std::string growth_report_to_json(const NInfinityReport& shape, const GrowthReport& growth);
std::string conjugate_report_to_json(const NFunction& phi, const ConjugateFunction& star,
                                     int samples, std::uint64_t seed);
std::string hypothesis_report_to_json(const ProblemSpec& spec);
std::string inequality_sweep_to_json(const NFunction& phi, int trials, std::size_t n,
                                     double period, std::uint64_t seed, int* failures_out);

} // namespace orlicz
