#pragma once

// Command-line front end.
//
//   fraclap fraclap      evaluate (-Delta)^s of a target on a grid
//   fraclap approximate  build and certify an s-harmonic approximant
//   fraclap demo NAME    harnack | logistic | meanvalue
//
// Exit codes: 0 success, 2 configuration or domain error, 3 evaluation
// error, 4 approximation or conditioning failure.

#include <ostream>
#include <string>
#include <vector>

namespace fraclap::cli {

enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kEvaluation = 3,
  kApproximation = 4,
};

// Flat key=value file; '#' starts a comment. Keys are long flag names.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace fraclap::cli
