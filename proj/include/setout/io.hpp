#pragma once

#include <string>

#include "setout/instance.hpp"

namespace setout {

struct ParseError : InstanceError {
    using InstanceError::InstanceError;
};
// An element (or point) covered by no set (or rectangle).
struct CoverageError : InstanceError {
    using InstanceError::InstanceError;
};
// A matrix-backed metric violating symmetry, zero-diagonal or the triangle
// inequality; the message names the offending entry or triple.
struct MetricError : InstanceError {
    using InstanceError::InstanceError;
};

// Triangle-inequality check is O(n^3); instances above this size skip it.
inline constexpr int kTriangleCheckCap = 256;

// Throws CoverageError / MetricError / InstanceError as appropriate.
void check_general(const GeneralInstance& inst);
void check_geometric(const GeometricInstance& inst);

Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& json_text);
void save_instance(const Instance& inst, const std::string& path);
std::string dump_instance(const Instance& inst);

TriSolution load_solution(const std::string& path);
TriSolution parse_solution(const std::string& json_text);
void save_solution(const TriSolution& sol, const std::string& path);
std::string dump_solution(const TriSolution& sol);

}  // namespace setout
