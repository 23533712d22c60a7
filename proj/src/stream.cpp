#include "spanstream/stream.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

namespace spanstream {

StreamSource::StreamSource(std::size_t n, std::vector<UpdateEvent> events)
    : n_(n), events_(std::move(events)) {
  std::unordered_set<std::uint64_t> live;
  for (const UpdateEvent& ev : events_) {
    if (ev.edge.v >= n_)
      throw std::invalid_argument("stream event endpoint out of range");
    if (ev.op == StreamOp::kInsert) {
      if (!live.insert(ev.edge.key()).second)
        throw std::invalid_argument("insert of an already-live edge");
    } else {
      if (live.erase(ev.edge.key()) == 0)
        throw std::invalid_argument("delete of a non-live edge");
    }
  }
}

UnweightedGraph StreamSource::materialize() const {
  UnweightedGraph g(n_);
  for (const UpdateEvent& ev : events_) {
    if (ev.op == StreamOp::kInsert)
      g.add_edge(ev.edge.u, ev.edge.v);
    else
      g.remove_edge(ev.edge.u, ev.edge.v);
  }
  return g;
}

StreamSource StreamSource::from_graph(const UnweightedGraph& g) {
  std::vector<UpdateEvent> events;
  events.reserve(g.m());
  std::vector<Edge> es = g.edges();
  std::sort(es.begin(), es.end());
  for (const Edge& e : es) events.push_back({StreamOp::kInsert, e});
  return StreamSource(g.n(), std::move(events));
}

void StreamSource::write(std::ostream& os) const {
  os << "n " << n_ << "\n";
  for (const UpdateEvent& ev : events_)
    os << (ev.op == StreamOp::kInsert ? '+' : '-') << ' ' << ev.edge.u << ' '
       << ev.edge.v << "\n";
}

StreamSource StreamSource::read(std::istream& is) {
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<UpdateEvent> events;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "n") {
      if (!(ls >> n)) throw std::invalid_argument("bad stream header");
      have_n = true;
    } else if (tok == "+" || tok == "-") {
      Vertex u, v;
      if (!(ls >> u >> v)) throw std::invalid_argument("bad stream event");
      events.push_back(
          {tok == "+" ? StreamOp::kInsert : StreamOp::kDelete, Edge(u, v)});
    } else {
      throw std::invalid_argument("unrecognized stream line: " + line);
    }
  }
  if (!have_n) throw std::invalid_argument("stream file missing 'n' header");
  return StreamSource(n, std::move(events));
}

StreamSource StreamSource::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open stream file: " + path);
  return read(f);
}

void StreamSource::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::ios_base::failure("cannot write stream file: " + path);
  write(f);
}

void open_pass(const StreamSource& src, Meters& meters,
               const std::function<void(const UpdateEvent&)>& consumer) {
  meters.pass.passes += 1;
  for (const UpdateEvent& ev : src.events()) consumer(ev);
}

void open_fused_pass(
    const StreamSource& src, Meters& meters,
    const std::vector<std::function<void(const UpdateEvent&)>>& stages) {
  meters.pass.passes += 1;
  for (const UpdateEvent& ev : src.events())
    for (const auto& stage : stages) stage(ev);
}

}  // namespace spanstream
