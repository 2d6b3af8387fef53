#include "crq/driver.hpp"

int main(int argc, char** argv) { return crq::cli_main(argc, argv); }
