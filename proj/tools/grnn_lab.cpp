#include "grnn/cli.hpp"

int main(int argc, char** argv)
{
  return grnn::cli::run(argc, argv);
}
