#include "durnet/minsky.hpp"

#include <string>

#include "durnet/errors.hpp"

namespace durnet {

MinskyMachine::MinskyMachine(std::vector<Instruction> program) : program_(std::move(program)) {
  const std::size_t n = program_.size();
  if (n == 0) throw ValidationError("machine has no instructions");
  auto check_target = [n](std::size_t i, std::size_t target) {
    if (target < 1 || target > n) {
      throw ValidationError("instruction " + std::to_string(i) + ": target " +
                            std::to_string(target) + " out of range 1.." + std::to_string(n));
    }
  };
  auto check_counter = [](std::size_t i, int b) {
    if (b != 0 && b != 1) {
      throw ValidationError("instruction " + std::to_string(i) + ": counter must be c0 or c1");
    }
  };
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& ins = program_[i - 1];
    if (std::holds_alternative<Halt>(ins)) {
      if (i != n) throw ValidationError("halt must be the last instruction (found at " + std::to_string(i) + ")");
    } else if (i == n) {
      throw ValidationError("last instruction must be halt");
    } else if (const auto* inc = std::get_if<Inc>(&ins)) {
      check_counter(i, inc->counter);
      check_target(i, inc->target);
    } else {
      const auto& jz = std::get<JzDec>(ins);
      check_counter(i, jz.counter);
      check_target(i, jz.zero_target);
      check_target(i, jz.dec_target);
    }
  }
}

MachineConfig step(const MinskyMachine& m, const MachineConfig& c) {
  MachineConfig next = c;
  const auto& ins = m.at(c.pc);
  if (const auto* inc = std::get_if<Inc>(&ins)) {
    (inc->counter == 0 ? next.c0 : next.c1) += 1;
    next.pc = inc->target;
  } else if (const auto* jz = std::get_if<JzDec>(&ins)) {
    auto& reg = jz->counter == 0 ? next.c0 : next.c1;
    if (reg == 0) {
      next.pc = jz->zero_target;
    } else {
      reg -= 1;
      next.pc = jz->dec_target;
    }
  } else {
    throw DomainError("step from a halt instruction");
  }
  return next;
}

RunResult run_machine(const MinskyMachine& m, std::uint64_t fuel, bool keep_trace) {
  RunResult r;
  MachineConfig c;
  while (true) {
    if (std::holds_alternative<Halt>(m.at(c.pc))) {
      r.halted = true;
      break;
    }
    if (r.steps == fuel) break;
    if (keep_trace) r.trace.push_back(c);
    c = step(m, c);
    ++r.steps;
  }
  r.config = c;
  return r;
}

}  // namespace durnet
