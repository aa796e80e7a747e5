#include <vector>

#include "tfus/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tfus::cli::run(args);
}
