#include <string>
#include <vector>

#include "twtsched/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return twtsched::cli::run(std::move(args));
}
