#include "holspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

namespace holspec {

double Mesh::triangle_area(std::size_t t) const {
    const auto& tr = triangles[t];
    const Point& a = vertices[std::size_t(tr[0])];
    const Point& b = vertices[std::size_t(tr[1])];
    const Point& c = vertices[std::size_t(tr[2])];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::area() const {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) s += triangle_area(t);
    return s;
}

namespace {

// x-positions of one vertical mesh line family: all boundary breakpoints in
// [a,b] plus uniform refinement of wide gaps
void add_gridlines(std::vector<double>& xs, const BoundaryFunction& f, double a, double b,
                   double target_h) {
    std::vector<double> bps;
    f.for_each_piece(a, b, [&](double x0, double x1, double, double) {
        if (bps.empty()) bps.push_back(x0);
        bps.push_back(x1);
    });
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double w = bps[i + 1] - bps[i];
        const int parts = std::max(1, int(std::ceil(w / target_h - 1e-12)));
        for (int k = 0; k < parts; ++k) xs.push_back(bps[i] + w * k / parts);
    }
    if (!bps.empty()) xs.push_back(bps.back());
}

void add_uniform(std::vector<double>& xs, double a, double b, double spacing) {
    const int parts = std::max(1, int(std::ceil((b - a) / spacing - 1e-12)));
    for (int k = 0; k <= parts; ++k) xs.push_back(a + (b - a) * k / parts);
}

}  // namespace

Mesh triangulate(const HolderSubgraphDomain& dom, const MeshOptions& opt) {
    if (!(opt.target_h > 0.0)) throw std::invalid_argument("triangulate: target_h must be > 0");
    const BoundaryFunction& f = dom.f();
    const double floor_y = dom.floor_y();
    const bool box = dom.has_base_box();
    const double base_h = opt.base_h > 0.0 ? opt.base_h : 4.0 * opt.target_h;

    // gridlines
    std::vector<double> xs;
    add_gridlines(xs, f, f.x_lo(), f.x_hi(), opt.target_h);
    if (box) {
        const BaseBox& bb = dom.base_box();
        if (bb.x_lo < f.x_lo()) add_uniform(xs, bb.x_lo, f.x_lo(), base_h);
        if (bb.x_hi > f.x_hi()) add_uniform(xs, f.x_hi(), bb.x_hi, base_h);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // vertical structure
    const double fmax = f.max_value();
    const int n_vert = std::max(1, int(std::ceil((fmax - floor_y) / opt.target_h - 1e-12)));
    std::vector<double> tj(std::size_t(n_vert) + 1);
    for (int j = 0; j <= n_vert; ++j) {
        const double u = double(j) / n_vert;
        tj[std::size_t(j)] = (opt.grade == 1.0) ? u : 1.0 - std::pow(1.0 - u, opt.grade);
    }
    tj.front() = 0.0;
    tj.back() = 1.0;

    std::vector<double> box_rows;  // y-rows of the base box, excluding y = 0
    if (box) {
        const BaseBox& bb = dom.base_box();
        const int rows = std::max(1, int(std::ceil((bb.y_hi - bb.y_lo) / base_h - 1e-12)));
        for (int r = 0; r < rows; ++r) box_rows.push_back(bb.y_lo + (bb.y_hi - bb.y_lo) * r / rows);
    }

    Mesh m;
    m.target_h = opt.target_h;
    m.line_x = xs;
    m.line_offsets.push_back(0);

    const double x_chart_lo = f.x_lo(), x_chart_hi = f.x_hi();
    auto in_chart_span = [&](double x) { return x >= x_chart_lo - 1e-15 && x <= x_chart_hi + 1e-15; };

    // per-line vertex generation
    std::vector<std::int32_t> chart_first(xs.size(), -1);  // index of the chart floor vertex
    std::vector<int> chart_count(xs.size(), 0);            // chart vertices above the floor
    for (std::size_t li = 0; li < xs.size(); ++li) {
        const double x = xs[li];
        const bool chart_line = in_chart_span(x);
        if (box) {
            for (double y : box_rows) {
                m.vertices.push_back({x, y});
                m.on_boundary.push_back(0);
            }
        }
        if (chart_line) {
            const double fx = f(std::clamp(x, x_chart_lo, x_chart_hi));
            chart_first[li] = std::int32_t(m.vertices.size());
            if (fx - floor_y > 1e-14) {
                for (int j = 0; j <= n_vert; ++j) {
                    m.vertices.push_back({x, floor_y + tj[std::size_t(j)] * (fx - floor_y)});
                    m.on_boundary.push_back(0);
                }
                chart_count[li] = n_vert + 1;
            } else {
                m.vertices.push_back({x, floor_y});  // degenerate column (f == floor)
                m.on_boundary.push_back(0);
                chart_count[li] = 1;
            }
        } else {
            // box-only line still carries the y = 0 row vertex
            m.vertices.push_back({x, 0.0});
            m.on_boundary.push_back(0);
        }
        m.line_offsets.push_back(std::int32_t(m.vertices.size()));
        if (m.n_vertices() > opt.max_vertices)
            throw std::runtime_error("triangulate: vertex budget exceeded");
    }

    auto box_vertex = [&](std::size_t li, int row) {
        return m.line_offsets[li] + std::int32_t(row);
    };
    auto top_vertex_of_line = [&](std::size_t li) {
        return m.line_offsets[li + 1] - 1;  // highest vertex on the line
    };

    // triangles between adjacent lines
    auto emit = [&](std::int32_t a, std::int32_t b, std::int32_t c) {
        const Point &pa = m.vertices[std::size_t(a)], &pb = m.vertices[std::size_t(b)],
                    &pc = m.vertices[std::size_t(c)];
        const double two_area = (pb.x - pa.x) * (pc.y - pa.y) - (pc.x - pa.x) * (pb.y - pa.y);
        if (std::abs(two_area) < 1e-30) return;  // degenerate sliver
        if (two_area > 0.0)
            m.triangles.push_back({a, b, c});
        else
            m.triangles.push_back({a, c, b});
    };

    for (std::size_t li = 0; li + 1 < xs.size(); ++li) {
        const std::size_t lr = li + 1;
        if (box) {
            const int rows = int(box_rows.size());
            for (int r = 0; r + 1 < rows; ++r) {
                emit(box_vertex(li, r), box_vertex(lr, r), box_vertex(lr, r + 1));
                emit(box_vertex(li, r), box_vertex(lr, r + 1), box_vertex(li, r + 1));
            }
            // top box layer connects to the y = 0 row (chart floor / box top)
            const std::int32_t tl = (chart_first[li] >= 0) ? chart_first[li]
                                                           : box_vertex(li, rows);
            const std::int32_t tr = (chart_first[lr] >= 0) ? chart_first[lr]
                                                           : box_vertex(lr, rows);
            if (rows >= 1) {
                emit(box_vertex(li, rows - 1), box_vertex(lr, rows - 1), tr);
                emit(box_vertex(li, rows - 1), tr, tl);
            }
        }
        // chart strip
        if (chart_first[li] < 0 || chart_first[lr] < 0) continue;
        const int cl = chart_count[li], cr = chart_count[lr];
        const std::int32_t al = chart_first[li], ar = chart_first[lr];
        if (cl > 1 && cr > 1) {
            for (int j = 0; j + 1 < cl; ++j) {
                emit(al + j, ar + j, ar + j + 1);
                emit(al + j, ar + j + 1, al + j + 1);
            }
        } else if (cl == 1 && cr > 1) {
            for (int j = 0; j + 1 < cr; ++j) emit(al, ar + j, ar + j + 1);
        } else if (cl > 1 && cr == 1) {
            for (int j = 0; j + 1 < cl; ++j) emit(al + j, ar, al + j + 1);
        }
    }

    // boundary flags
    for (std::size_t li = 0; li < xs.size(); ++li) {
        const double x = xs[li];
        const bool chart_line = in_chart_span(x);
        if (chart_line) {
            m.on_boundary[std::size_t(top_vertex_of_line(li))] = 1;  // graph
            if (!box && chart_count[li] >= 1)
                m.on_boundary[std::size_t(chart_first[li])] = 1;  // floor
            if (box && (std::abs(x - x_chart_lo) < 1e-14 || std::abs(x - x_chart_hi) < 1e-14))
                for (std::int32_t v = chart_first[li]; v < m.line_offsets[li + 1]; ++v)
                    m.on_boundary[std::size_t(v)] = 1;  // chart side walls above the box
        }
        if (li == 0 || li + 1 == xs.size()) {
            for (std::int32_t v = m.line_offsets[li]; v < m.line_offsets[li + 1]; ++v)
                m.on_boundary[std::size_t(v)] = 1;  // outermost walls
        }
    }
    if (box) {
        const BaseBox& bb = dom.base_box();
        for (std::size_t v = 0; v < m.vertices.size(); ++v) {
            const Point& p = m.vertices[v];
            if (std::abs(p.y - bb.y_lo) < 1e-14) m.on_boundary[v] = 1;
            if (std::abs(p.y) < 1e-14 && (p.x <= x_chart_lo + 1e-14 || p.x >= x_chart_hi - 1e-14))
                m.on_boundary[v] = 1;  // box top outside the chart opening
        }
    } else {
        // chart side walls
        for (std::size_t li : {std::size_t(0), xs.size() - 1})
            for (std::int32_t v = m.line_offsets[li]; v < m.line_offsets[li + 1]; ++v)
                m.on_boundary[std::size_t(v)] = 1;
    }
    return m;
}

Mesh submesh(const Mesh& m, const SubmeshBox& box) {
    const double tol = 1e-12;
    std::vector<std::int32_t> remap(m.vertices.size(), -1);
    Mesh out;
    out.target_h = m.target_h;
    auto vertex_in = [&](std::int32_t v) {
        const Point& p = m.vertices[std::size_t(v)];
        return p.x >= box.x_lo - tol && p.x <= box.x_hi + tol && p.y >= box.y_lo - tol &&
               p.y <= box.y_hi + tol;
    };
    std::vector<std::uint8_t> used(m.vertices.size(), 0);
    std::vector<std::array<std::int32_t, 3>> tris;
    for (const auto& tr : m.triangles) {
        if (vertex_in(tr[0]) && vertex_in(tr[1]) && vertex_in(tr[2])) {
            tris.push_back(tr);
            used[std::size_t(tr[0])] = used[std::size_t(tr[1])] = used[std::size_t(tr[2])] = 1;
        }
    }
    // keep line-major vertex order so the block structure survives
    out.line_offsets.push_back(0);
    for (std::size_t li = 0; li + 1 < m.line_offsets.size(); ++li) {
        bool any = false;
        for (std::int32_t v = m.line_offsets[li]; v < m.line_offsets[li + 1]; ++v) {
            if (!used[std::size_t(v)]) continue;
            remap[std::size_t(v)] = std::int32_t(out.vertices.size());
            const Point& p = m.vertices[std::size_t(v)];
            out.vertices.push_back(p);
            const bool edge = std::abs(p.x - box.x_lo) < tol || std::abs(p.x - box.x_hi) < tol ||
                              std::abs(p.y - box.y_lo) < tol || std::abs(p.y - box.y_hi) < tol;
            out.on_boundary.push_back(edge ? 1 : 0);
            any = true;
        }
        if (any) {
            out.line_x.push_back(m.line_x[li]);
            out.line_offsets.push_back(std::int32_t(out.vertices.size()));
        }
    }
    for (const auto& tr : tris)
        out.triangles.push_back({remap[std::size_t(tr[0])], remap[std::size_t(tr[1])],
                                 remap[std::size_t(tr[2])]});
    return out;
}

std::string mesh_csv(const Mesh& m) {
    std::string out = "kind,a,b,c\n";
    char buf[128];
    for (const auto& v : m.vertices) {
        std::snprintf(buf, sizeof buf, "v,%.17g,%.17g,\n", v.x, v.y);
        out += buf;
    }
    for (const auto& t : m.triangles) {
        std::snprintf(buf, sizeof buf, "t,%d,%d,%d\n", t[0], t[1], t[2]);
        out += buf;
    }
    return out;
}

}  // namespace holspec
