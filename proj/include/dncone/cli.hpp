#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dncone {

// args excludes the program name. Exit codes: 0 success, 1 a property
// claimed to hold was found violated (verify failures, check-dn on a
// non-DN matrix), 2 invalid input or configuration, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dncone
