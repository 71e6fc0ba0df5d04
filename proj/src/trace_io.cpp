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


#include <zlib.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "xorht/workload.hpp"

namespace xorht {

namespace {

bool is_gz(const std::string& path) { return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0; }

std::string describe(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  return os.str();
}

}  // namespace

TraceParseError::TraceParseError(std::size_t line, const std::string& what)
    : std::runtime_error(describe(line, what)), line_(line) {}

std::vector<Query> read_trace(std::istream& is) {
  std::vector<Query> trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string op_tok;
    if (!(ls >> op_tok)) continue;
    if (op_tok.size() != 1) throw TraceParseError(lineno, "bad op '" + op_tok + "'");
    const auto op = op_from_letter(op_tok[0]);
    if (!op) throw TraceParseError(lineno, "unknown op '" + op_tok + "'");

    std::string key_tok;
    if (!(ls >> key_tok)) throw TraceParseError(lineno, "missing key");
    const auto key = parse_hex(key_tok);
    if (!key) throw TraceParseError(lineno, "bad key hex '" + key_tok + "'");

    Query q;
    q.op = *op;
    q.key = *key;
    q.trace_index = trace.size();
    std::string value_tok;
    const bool has_value = static_cast<bool>(ls >> value_tok);
    if (*op == OpKind::Insert || *op == OpKind::Update) {
      if (!has_value) throw TraceParseError(lineno, "missing value");
      const auto value = parse_hex(value_tok);
      if (!value) throw TraceParseError(lineno, "bad value hex '" + value_tok + "'");
      q.value = *value;
    } else if (has_value) {
      throw TraceParseError(lineno, "unexpected value for " + std::string(to_string(*op)));
    }
    std::string extra;
    if (ls >> extra) throw TraceParseError(lineno, "trailing field '" + extra + "'");
    trace.push_back(q);
  }
  return trace;
}

void write_trace(std::ostream& os, const std::vector<Query>& trace, unsigned key_bits, unsigned value_bits) {
  const unsigned kd = hex_digits(key_bits);
  const unsigned vd = hex_digits(value_bits);
  os << "# xorht trace: " << trace.size() << " queries, key_bits " << key_bits << ", value_bits " << value_bits
     << '\n';
  for (const Query& q : trace) {
    os << op_letter(q.op) << ' ' << to_hex(q.key, kd);
    if (q.op == OpKind::Insert || q.op == OpKind::Update) os << ' ' << to_hex(q.value, vd);
    os << '\n';
  }
}

std::vector<Query> trace_read(const std::string& path) {
  // gzread passes uncompressed files through unchanged.
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw std::runtime_error("cannot open trace " + path);
  std::string text;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(f, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(n));
  const bool failed = n < 0;
  gzclose(f);
  if (failed) throw std::runtime_error("read error in trace " + path);
  std::istringstream is(text);
  return read_trace(is);
}

void trace_write(const std::string& path, const std::vector<Query>& trace, unsigned key_bits,
                 unsigned value_bits) {
  if (!is_gz(path)) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write trace " + path);
    write_trace(os, trace, key_bits, value_bits);
    if (!os) throw std::runtime_error("write error in trace " + path);
    return;
  }
  std::ostringstream os;
  write_trace(os, trace, key_bits, value_bits);
  const std::string text = os.str();
  gzFile f = gzopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot write trace " + path);
  const int written = text.empty() ? 0 : gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  const int rc = gzclose(f);
  if ((!text.empty() && written <= 0) || rc != Z_OK) throw std::runtime_error("write error in trace " + path);
}

}  // namespace xorht
