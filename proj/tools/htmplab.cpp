#include <string>
#include <vector>

#include "htmp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return htmp::cli::dispatch(args);
}
