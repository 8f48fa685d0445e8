#include "hybridex/cli.hpp"

int main(int argc, char** argv)
{
    return hybridex::cli_main(argc, argv);
}
