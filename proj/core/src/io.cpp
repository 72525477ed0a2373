#include "submatch/io.hpp"

#include <fstream>
#include <sstream>

namespace submatch {

QueryGraph read_graph(std::istream& in) {
  Vertex n;
  std::uint64_t m;
  if (!(in >> n >> m)) throw FormatError("graph header: expected \"n m\"");
  QueryGraph g(n);
  for (std::uint64_t i = 0; i < m; ++i) {
    Vertex u, v;
    if (!(in >> u >> v))
      throw FormatError("graph edge " + std::to_string(i) + ": expected \"u v\"");
    if (u >= v) throw FormatError("graph edges must satisfy u < v");
    g.set_edge(u, v, true);
  }
  return g;
}

void write_graph(std::ostream& out, const QueryGraph& g) {
  auto edges = edge_list(g);
  out << g.size() << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
}

std::vector<Edge> edge_list(const QueryGraph& g) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v)
      if (g.peek(u, v)) edges.push_back(Edge{u, v});
  return edges;
}

std::vector<StreamItem> read_stream(std::istream& in) {
  std::vector<StreamItem> items;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    char tag;
    ls >> tag;
    if (tag == '?') {
      items.push_back(StreamItem{StreamItem::Kind::Checkpoint, {}});
      continue;
    }
    if (tag != '+' && tag != '-')
      throw FormatError("stream line: expected '+', '-' or '?': " + line);
    Vertex u, v;
    if (!(ls >> u >> v)) throw FormatError("stream line: expected vertices: " + line);
    UpdateOp op = tag == '+' ? UpdateOp::Insert : UpdateOp::Delete;
    items.push_back(StreamItem{StreamItem::Kind::Update, Update{op, u, v}});
  }
  return items;
}

void write_stream(std::ostream& out, const std::vector<StreamItem>& items) {
  for (const StreamItem& it : items) {
    if (it.kind == StreamItem::Kind::Checkpoint) {
      out << "?\n";
    } else {
      out << static_cast<char>(it.update.op) << ' ' << it.update.u << ' '
          << it.update.v << '\n';
    }
  }
}

QueryGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph_file(const std::string& path, const QueryGraph& g) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open graph file for write: " + path);
  write_graph(out, g);
}

std::vector<StreamItem> read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open stream file: " + path);
  return read_stream(in);
}

void write_stream_file(const std::string& path,
                       const std::vector<StreamItem>& items) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open stream file for write: " + path);
  write_stream(out, items);
}

}  // namespace submatch
