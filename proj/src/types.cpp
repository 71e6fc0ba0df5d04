// Copyright 2026 The xorht Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xorht/types.hpp"

namespace xorht {

std::string_view to_string(OpKind op) {
  switch (op) {
    case OpKind::Search: return "search";
    case OpKind::Insert: return "insert";
    case OpKind::Update: return "update";
    case OpKind::Delete: return "delete";
  }
  return "?";
}

char op_letter(OpKind op) {
  switch (op) {
    case OpKind::Search: return 'S';
    case OpKind::Insert: return 'I';
    case OpKind::Update: return 'U';
    case OpKind::Delete: return 'D';
  }
  return '?';
}

std::optional<OpKind> op_from_letter(char c) {
  switch (c) {
    case 'S': return OpKind::Search;
    case 'I': return OpKind::Insert;
    case 'U': return OpKind::Update;
    case 'D': return OpKind::Delete;
    default: return std::nullopt;
  }
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Found: return "found";
    case Outcome::None: return "none";
    case Outcome::Inserted: return "inserted";
    case Outcome::Updated: return "updated";
    case Outcome::Deleted: return "deleted";
    case Outcome::InsertFailed: return "insert_failed";
    case Outcome::CapacityViolation: return "capacity_violation";
  }
  return "?";
}

}  // namespace xorht
