#pragma once

#include <iosfwd>
#include <string>

#include "glelab/experiment.hpp"

namespace glelab {

// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitUsage = 2, kExitNumerical = 3 };

struct ValidateOptions {
    std::string kernel = "kv_8_8";  // kv_8_8 | exp:γ,τ,λ | prony:r | prony:c,a,b;… | file:path
    double h = 0.2;
    double beta = 1.0;
};

// Kernel argument of `validate`, resolved to a parameter set with n = 1
// (kv_8_8, exp, prony) or as stored (file).
GleParams kernel_from_argument(const std::string& arg, double beta);

int cmd_sweep(const std::string& config_path, const RunOptions& options, std::ostream& out);
int cmd_validate(const ValidateOptions& options, std::ostream& out);
int cmd_mixture(const std::string& config_path, bool synthetic, const RunOptions& options,
                std::ostream& out);

}  // namespace glelab
