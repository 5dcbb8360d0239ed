// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace crowdshare::cli {

enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitUsage = 2 };

/// Parses arguments and runs one subcommand. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace crowdshare::cli
