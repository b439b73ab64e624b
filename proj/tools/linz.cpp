#include <string>
#include <vector>

#include "lin/cli.hpp"

int main(int argc, char** argv) { return lin::run_cli(std::vector<std::string>(argv, argv + argc)); }
