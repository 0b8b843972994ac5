#pragma once

#include <string>
#include <vector>

#include "otdr/datagen.hpp"
#include "otdr/groups.hpp"
#include "otdr/solver.hpp"
#include "otdr/types.hpp"

namespace otdr {

/* File formats.
 *
 * Matrices: CSV, one matrix row per line, no header; or the raw binary
 * format "OTPB": 16-byte header (magic "OTPB", u32 m, u32 n, 4 reserved zero
 * bytes, all little-endian) followed by m*n float64 row-major payload.
 * read_matrix sniffs the magic. Vectors: one value per line (a single CSV
 * row is also accepted).
 *
 * Group partitions: one group per line, either explicit cells
 *   g <id>: (i,j) (i,j) ...
 * or the rectangular shorthand
 *   cols <label>: j1..j2 rows i1..i2
 *
 * Point clouds: CSV with header x0,x1,...[,label].
 *
 * All doubles are printed with 17 significant digits so write/read round-trips
 * are bit-exact.
 */

std::string format_double(double v);

Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);

Matrix read_matrix_otpb(const std::string& path);
void write_matrix_otpb(const std::string& path, const Matrix& m);

// Dispatches on the OTPB magic, CSV otherwise.
Matrix read_matrix(const std::string& path);

Vector read_vector(const std::string& path);
void write_vector(const std::string& path, const Vector& v);

GroupPartition read_groups(const std::string& path, Index rows, Index cols);
void write_groups(const std::string& path, const GroupPartition& partition);

PointCloud read_point_cloud(const std::string& path);
void write_point_cloud(const std::string& path, const PointCloud& cloud);

// Trace CSV: iter,r_primal,gap,dual_residual,support,elapsed_ms. NaN fields
// (e.g. gap on baseline runs) are written empty.
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace);

}  // namespace otdr
