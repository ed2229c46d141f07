#pragma once

namespace epigrow {

// exit codes: 0 ok, 1 usage, 2 numerical/certification failure, 3 I/O error
int cli_main(int argc, const char* const* argv);

}  // namespace epigrow
