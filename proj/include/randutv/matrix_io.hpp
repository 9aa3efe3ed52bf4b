#pragma once

#include <string>

#include "randutv/matrix.hpp"

namespace randutv {

/// Binary matrix container: bytes "RUTV", then rows and cols as little-endian
/// uint64, then rows*cols doubles (little-endian IEEE 754) in column-major
/// order.  Round-trips are bit-exact.
void write_rutv(const std::string& path, ConstMatrixView a);
Matrix read_rutv(const std::string& path);

/// Plain CSV, one matrix row per line, values printed with enough digits
/// (%.17g) that finite doubles round-trip bit-exactly.  The reader rejects
/// ragged rows and non-numeric or non-finite fields.
void write_csv(const std::string& path, ConstMatrixView a);
Matrix read_csv(const std::string& path);

/// Dispatch on extension: ".rutv" binary, ".csv" text; anything else is an
/// IoError.
void write_matrix(const std::string& path, ConstMatrixView a);
Matrix read_matrix(const std::string& path);

}  // namespace randutv
