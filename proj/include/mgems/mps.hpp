#pragma once

#include <iosfwd>
#include <string>

#include "mgems/milp.hpp"

namespace mgems {

/// Writes the instance in free MPS format. Columns are named x<i> (the
/// semantic role of each variable is kept in a leading comment block);
/// binaries are wrapped in INTORG/INTEND markers. Deterministic output,
/// full-precision numbers.
void write_mps(const MilpInstance& instance, std::ostream& out);
std::string to_mps(const MilpInstance& instance);

/// Reads the free MPS subset emitted by write_mps (NAME/ROWS/COLUMNS/RHS/
/// BOUNDS/ENDATA plus integrality markers). RANGES sections are rejected.
MilpInstance read_mps(std::istream& in);

/// Solution exchange: one "status <s>" line, one "objective <v>" line, then
/// "<column> <value>" lines.
void write_solution(const MilpSolution& solution, const MilpInstance& instance,
                    std::ostream& out);
MilpSolution read_solution(std::istream& in, const MilpInstance& instance);

}  // namespace mgems
