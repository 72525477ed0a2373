#include "submatch/graph.hpp"

namespace submatch {

QueryGraph::QueryGraph(Vertex n) : n_(n) {
  if (n < 0) throw InvalidParameter("negative vertex count");
  std::size_t nbits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  bits_.assign((nbits + 63) / 64, 0);
}

bool QueryGraph::edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  ++probes_;
  if (u == v) return false;
  return get_bit(u, v);
}

bool QueryGraph::peek(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return false;
  return get_bit(u, v);
}

void QueryGraph::set_edge(Vertex u, Vertex v, bool present) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw SelfLoopError("self loop");
  for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
    std::size_t i = bit_index(a, b);
    if (present)
      bits_[i >> 6] |= (1ULL << (i & 63));
    else
      bits_[i >> 6] &= ~(1ULL << (i & 63));
  }
}

std::optional<std::vector<Vertex>> QueryGraph::neighbors_via_matrix(
    Vertex v, ProbeBudget* budget) const {
  check_vertex(v);
  if (budget && !budget->try_charge(static_cast<std::uint64_t>(n_)))
    return std::nullopt;
  std::vector<Vertex> out;
  for (Vertex u = 0; u < n_; ++u)
    if (edge(v, u)) out.push_back(u);
  return out;
}

void DynamicGraph::apply(UpdateOp op, Vertex u, Vertex v) {
  if (u == v) throw SelfLoopError("self loop update");
  bool present = g_.peek(u, v);
  if (op == UpdateOp::Insert) {
    if (present)
      throw DuplicateInsert("insert of existing edge (" + std::to_string(u) +
                            "," + std::to_string(v) + ")");
    g_.set_edge(u, v, true);
    ++m_;
  } else {
    if (!present)
      throw MissingDelete("delete of missing edge (" + std::to_string(u) +
                          "," + std::to_string(v) + ")");
    g_.set_edge(u, v, false);
    --m_;
  }
  log_.push_back(Update{op, u, v});
}

}  // namespace submatch
