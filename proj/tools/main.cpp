#include <vector>

#include "entgeo/cli.hpp"

int main(int argc, char** argv) {
  return entgeo::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
