#pragma once

#include <string>
#include <string_view>

#include "durnet/minsky.hpp"
#include "durnet/multiset.hpp"
#include "durnet/net.hpp"

// ASCII surface syntax shared by the CLI, fixtures and transcripts.
//
//   marking      := "~" | token+          token := stamp "@" place ["*" count]
//   multiset     := "~" | item+           item  := place ["*" count]
//   net line     := "rule" label "dur=" n ":" multiset "->" multiset
//   machine line := i ":" ( "inc c" b "goto" j
//                         | "jzdec c" b "zero" k "else" j
//                         | "halt" )
//
// Tokens are whitespace separated (whitespace-insensitive otherwise), "#"
// starts a comment, LF and CRLF are accepted and LF is emitted. Every parse
// error is a ParseError carrying the offending SourceSpan.
namespace durnet {

DurationalMarking parse_marking(std::string_view text, std::string_view file = {});
std::string render_marking(const DurationalMarking& m);

PlaceMultiset parse_multiset(std::string_view text, std::string_view file = {});
std::string render_multiset(const PlaceMultiset& m);

Net parse_net(std::string_view text, std::string_view file = {});
std::string render_net(const Net& net);
std::string render_rule(const TransitionRule& rule);

MinskyMachine parse_machine(std::string_view text, std::string_view file = {});
std::string render_machine(const MinskyMachine& m);

// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace durnet
