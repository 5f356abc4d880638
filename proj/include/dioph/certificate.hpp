#pragma once

#include <iosfwd>
#include <string>

#include "dioph/decompose.hpp"

namespace dioph {

// Certificate text: parameters, schedule, `correction j a`, `designed i j cut end`,
// `repair j pos`, `attest key=value`, `warning ...`, and the digit file names.
void write_certificate(std::ostream& out, const Decomposition& d,
                       const std::vector<std::string>& target_files,
                       const std::vector<std::string>& component_files);

// Writes x0.dig, x1.dig, ..., the targets (xi1.dig, ...) and cert.txt into dir.
void write_decomposition(const std::string& dir, const Decomposition& d);

// Loads cert.txt and the digit files it names (relative to the certificate's directory).
Decomposition read_decomposition(const std::string& cert_path);

std::string certificate_summary(const Decomposition& d);

}  // namespace dioph
