#pragma once
#include <ostream>
#include <string>
#include <vector>

namespace cohom::cli {

// Exit codes: 0 ok, 2 validation, 3 solver failure, 4 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// CSV column order of eval, classify and solve samples.
const std::vector<std::string>& csv_columns();

}  // namespace cohom::cli
