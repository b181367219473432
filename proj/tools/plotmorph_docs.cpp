// Regenerates docs/supported.md from the translator registry.
//
//   plotmorph-docs [output-path]     (stdout when omitted)

#include <fstream>
#include <iostream>

#include "plotmorph/translate.hpp"

int main(int argc, char** argv) {
  const auto text = plotmorph::translate::supported_markdown();
  if (argc < 2) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(argv[1], std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << argv[1] << '\n';
    return 1;
  }
  return 0;
}
