#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "submatch/graph.hpp"

namespace submatch {

// Graph text format: first line "n m", then m lines "u v" with 0 <= u < v < n.
QueryGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const QueryGraph& g);
QueryGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const QueryGraph& g);

// Update stream format: lines "+ u v", "- u v" and "?" (checkpoint marker).
struct StreamItem {
  enum class Kind { Update, Checkpoint };
  Kind kind;
  Update update{};  // valid when kind == Update
};

std::vector<StreamItem> read_stream(std::istream& in);
void write_stream(std::ostream& out, const std::vector<StreamItem>& items);
std::vector<StreamItem> read_stream_file(const std::string& path);
void write_stream_file(const std::string& path,
                       const std::vector<StreamItem>& items);

std::vector<Edge> edge_list(const QueryGraph& g);

}  // namespace submatch
