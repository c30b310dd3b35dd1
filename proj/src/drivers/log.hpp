// Run log controlled by the print-level slot: 0 silent, 1 to standard
// output, negative n appends to feast<|n|>.log in the working directory.
#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace spslice {

class RunLog {
public:
  explicit RunLog(int print_level) : level_(print_level) {
    if (level_ < 0) {
      file_.open("feast" + std::to_string(-level_) + ".log", std::ios::app);
    }
  }

  bool enabled() const { return level_ != 0; }
  std::ostream& out() { return level_ < 0 ? static_cast<std::ostream&>(file_) : std::cout; }

  template <class... Args>
  void line(Args&&... args) {
    if (!enabled()) return;
    (out() << ... << args) << '\n';
  }

private:
  int level_;
  std::ofstream file_;
};

} // namespace spslice
