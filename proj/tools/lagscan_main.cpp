#include <string>
#include <vector>

#include "lagscan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lagscan::run_cli(args);
}
