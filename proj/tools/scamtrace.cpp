#include <string>
#include <vector>

#include "scamtrace/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return scamtrace::cli::run(args);
}
