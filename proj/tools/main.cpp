#include "fuspos/cli.hpp"

int main(int argc, char** argv) {
    return fuspos::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
