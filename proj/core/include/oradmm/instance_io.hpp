#pragma once

// Plain-text instance container.
//
//   oradmm-instance 1
//   kind lasso            | kind covsel
//   m <rows>              | n <size>
//   n <cols>              | tau <value>
//   rho <value>           | seed <u64>
//   seed <u64>            | data
//   data                  | <n lines of S, row-major>
//   <m lines of A, row-major>
//   <1 line of b>
//
// Values are written with 17 significant digits so a save/load round trip
// is exact.

#include "oradmm/covsel.hpp"
#include "oradmm/lasso.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace oradmm {

enum class InstanceKind { lasso, covsel };

void write_instance(std::ostream& os, const LassoInstance& instance);
void write_instance(std::ostream& os, const CovselInstance& instance);

LassoInstance read_lasso(std::istream& is);
CovselInstance read_covsel(std::istream& is);

/// Reads just the kind line of a container.
InstanceKind peek_instance_kind(const std::filesystem::path& path);

/// File variants; I/O failures throw std::runtime_error naming the path.
void save_instance(const std::filesystem::path& path, const LassoInstance& instance);
void save_instance(const std::filesystem::path& path, const CovselInstance& instance);
LassoInstance load_lasso(const std::filesystem::path& path);
CovselInstance load_covsel(const std::filesystem::path& path);

}  // namespace oradmm
