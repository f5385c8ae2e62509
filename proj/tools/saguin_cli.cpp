#include "saguin/cli.hpp"

int main(int argc, char** argv) {
  saguin::configure_allocator();
  return saguin::cli_main(argc, argv);
}
