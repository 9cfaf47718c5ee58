// Generates a random one-line instance and finds its sink under both
// oracle models.

#include <cstdlib>
#include <iostream>

#include "gridsink/gridsink.hpp"

int main(int argc, char** argv) {
    const int m = argc > 1 ? std::atoi(argv[1]) : 8;
    const int n = argc > 2 ? std::atoi(argv[2]) : 13;
    const gridsink::Seed seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

    const gridsink::ValueMatrix values = gridsink::gen_one_line(m, n, seed);

    auto vertex = gridsink::vertex_oracle(values);
    const auto rect = gridsink::rectangular_solve(vertex);
    std::cout << "rect:    sink (" << rect.sink.row + 1 << "," << rect.sink.col + 1 << ") after "
              << rect.queries.vertex_queries << " vertex queries (bound " << m + n - 1 << ")\n";

    auto edge = gridsink::edge_oracle(values);
    const auto dc = gridsink::dc_edge_solve(edge);
    std::cout << "dc-edge: sink (" << dc.sink.row + 1 << "," << dc.sink.col + 1 << ") after "
              << dc.queries.edge_queries << " edge queries\n";

    const auto truth = gridsink::brute_force_sink(values);
    return truth == rect.sink && truth == dc.sink ? 0 : 1;
}
