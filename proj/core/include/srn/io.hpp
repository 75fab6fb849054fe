#pragma once
// Output plumbing: columnar snapshots with lossless round-trip, trajectory
// CSVs, line-delimited process records, and provenance stamping.

#include <iosfwd>
#include <string>

#include "srn/bellprocess.hpp"
#include "srn/bohm.hpp"

namespace srn {

inline constexpr const char* kVersion = "0.1.0";

// "# srn <version> config=<hex hash>" header line
std::string stamp_line(uint64_t config_hash);

void write_snapshot(std::ostream& os, const MiniFockState& s, const RadialGrid& grid,
                    double t, uint64_t config_hash);
MiniFockState read_snapshot(std::istream& is, const RadialGrid& grid, double* t = nullptr);

void write_trajectory(std::ostream& os, const TrajectoryResult& tr, uint64_t config_hash);

void write_process_record(std::ostream& os, const ProcessRecord& rec, uint64_t config_hash);
void write_equivariance_report(std::ostream& os, const EquivarianceReport& rep,
                               uint64_t config_hash);

}  // namespace srn
