#include "relscatter_app/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return relscatter::app::run_command(args, std::cout, std::cerr);
}
