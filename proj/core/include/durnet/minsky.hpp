#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace durnet {

// Two-counter Minsky machine. Instructions are numbered from 1; the last
// instruction is the unique `halt`.
struct Inc {
  int counter = 0;  // 0 or 1
  std::size_t target = 0;
  friend bool operator==(const Inc&, const Inc&) = default;
};

struct JzDec {
  int counter = 0;
  std::size_t zero_target = 0;  // taken when the counter is 0
  std::size_t dec_target = 0;   // taken after decrementing a positive counter
  friend bool operator==(const JzDec&, const JzDec&) = default;
};

struct Halt {
  friend bool operator==(const Halt&, const Halt&) = default;
};

using Instruction = std::variant<Inc, JzDec, Halt>;

class MinskyMachine {
 public:
  // Throws ValidationError unless targets are in range, counters are 0/1 and
  // exactly the last instruction is Halt.
  explicit MinskyMachine(std::vector<Instruction> program);

  std::size_t size() const noexcept { return program_.size(); }
  // 1-based.
  const Instruction& at(std::size_t index) const { return program_.at(index - 1); }
  const std::vector<Instruction>& program() const noexcept { return program_; }

  friend bool operator==(const MinskyMachine&, const MinskyMachine&) = default;

 private:
  std::vector<Instruction> program_;
};

struct MachineConfig {
  std::size_t pc = 1;
  std::uint64_t c0 = 0;
  std::uint64_t c1 = 0;

  std::uint64_t counter(int b) const { return b == 0 ? c0 : c1; }
  friend bool operator==(const MachineConfig&, const MachineConfig&) = default;
};

struct RunResult {
  bool halted = false;
  std::uint64_t steps = 0;
  MachineConfig config;          // final configuration, or the one where fuel ran out
  std::vector<MachineConfig> trace;  // configurations before each executed step
};

// Executes one instruction. Requires the configuration not to be at Halt.
MachineConfig step(const MinskyMachine& m, const MachineConfig& c);

// Runs from (pc=1, 0, 0) for at most `fuel` instruction executions.
RunResult run_machine(const MinskyMachine& m, std::uint64_t fuel, bool keep_trace = false);

}  // namespace durnet
