#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mhdmc/discrete_ops.hpp"
#include "mhdmc/physics.hpp"

namespace mhdmc {

/// Legacy ASCII VTK, STRUCTURED_POINTS with cell data rho, u, B, divB, curlB.
void write_vtk(const std::filesystem::path& path, const State& s, const BoundaryTraces& traces,
               const std::string& title = "mhdmc state");

/// Full-precision dump: magic "MHDMCST1", int32 nx1, nx2, float64 x1a, x1b, x2a, x2b,
/// then rho, u1, u2, B1, B2 as float64 arrays in cell order, little endian.
void write_state_binary(const std::filesystem::path& path, const State& s);
State read_state_binary(const std::filesystem::path& path);

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mhdmc
