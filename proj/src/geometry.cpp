#include "repsurf/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "repsurf/error.hpp"

namespace repsurf {

void PointCloud::validate() const {
    if (points.empty()) {
        raise(ErrorCode::invalid_input, "point cloud is empty");
    }
    for (const auto& p : points) {
        if (!p.finite()) {
            raise(ErrorCode::invalid_input, "point cloud contains a non-finite coordinate");
        }
    }
    if (attr_dim > 0 && attrs.size() != points.size() * attr_dim) {
        raise(ErrorCode::invalid_input, "attribute buffer does not match attr_dim * N");
    }
    for (float a : attrs) {
        if (!std::isfinite(a)) {
            raise(ErrorCode::invalid_input, "point cloud contains a non-finite attribute");
        }
    }
}

PointCloud normalize_unit_cube(const PointCloud& cloud) {
    cloud.validate();

    Vec3d lo(cloud.points[0]);
    Vec3d hi(cloud.points[0]);
    for (const auto& pf : cloud.points) {
        const Vec3d p(pf);
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Vec3d center = (lo + hi) * 0.5;
    const Vec3d half = (hi - lo) * 0.5;
    const double scale = std::max({half.x, half.y, half.z});

    PointCloud out;
    out.points.reserve(cloud.size());
    out.attrs = cloud.attrs;
    out.attr_dim = cloud.attr_dim;
    for (const auto& pf : cloud.points) {
        if (scale <= 0.0) {
            out.points.push_back({0, 0, 0});  // fully coincident cloud
        } else {
            const Vec3d q = (Vec3d(pf) - center) / scale;
            out.points.push_back(Vec3f(q));
        }
    }
    return out;
}

namespace {

struct Candidate {
    double d2;
    std::uint32_t index;

    // Total order: closer first, smaller index on ties. This uniquely
    // determines every kNN row, so the brute-force and kd-tree paths agree
    // bitwise.
    bool operator<(const Candidate& o) const {
        return d2 != o.d2 ? d2 < o.d2 : index < o.index;
    }
};

void check_knn_args(const PointCloud& cloud, std::uint32_t k) {
    cloud.validate();
    if (k < 1 || k >= cloud.size()) {
        raise(ErrorCode::invalid_argument,
              "k must satisfy 1 <= k <= N-1 (k=" + std::to_string(k) +
                  ", N=" + std::to_string(cloud.size()) + ")");
    }
}

// Bounded worst-candidate set kept as a max-heap under the Candidate order.
class KBest {
public:
    explicit KBest(std::uint32_t k) : k_(k) { heap_.reserve(k); }

    bool full() const { return heap_.size() == k_; }
    const Candidate& worst() const { return heap_.front(); }

    void offer(const Candidate& c) {
        if (!full()) {
            heap_.push_back(c);
            std::push_heap(heap_.begin(), heap_.end());
        } else if (c < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = c;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    void emit_sorted(std::vector<std::uint32_t>& out) {
        std::sort(heap_.begin(), heap_.end());
        for (const auto& c : heap_) out.push_back(c.index);
        heap_.clear();
    }

private:
    std::uint32_t k_;
    std::vector<Candidate> heap_;
};

}  // namespace

NeighborIndex knn_bruteforce(const PointCloud& cloud, std::uint32_t k) {
    check_knn_args(cloud, k);
    const std::size_t n = cloud.size();

    NeighborIndex out;
    out.k = k;
    out.indices.reserve(n * k);

    KBest best(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            best.offer({squared_distance(cloud.points[i], cloud.points[j]),
                        static_cast<std::uint32_t>(j)});
        }
        best.emit_sorted(out.indices);
    }
    return out;
}

namespace {

// Static kd-tree over point indices; exact search (prunes a subtree only
// when every point in it is strictly worse than the current k-th candidate).
class KdTree {
public:
    explicit KdTree(const std::vector<Vec3f>& pts) : pts_(pts) {
        order_.resize(pts.size());
        std::iota(order_.begin(), order_.end(), 0u);
        nodes_.reserve(pts.size() * 2);
        root_ = build(0, pts.size());
    }

    void knn(const Vec3f& query, std::uint32_t self, KBest& best) const {
        search(root_, query, self, best);
    }

private:
    static constexpr std::size_t kLeafSize = 16;
    static constexpr int kNoChild = -1;

    struct Node {
        int axis = 0;        // split axis, or -1 for leaf
        double split = 0;    // split coordinate
        int left = kNoChild;
        int right = kNoChild;
        std::uint32_t begin = 0, end = 0;  // leaf range into order_
    };

    int build(std::size_t begin, std::size_t end) {
        Node node;
        if (end - begin <= kLeafSize) {
            node.axis = -1;
            node.begin = static_cast<std::uint32_t>(begin);
            node.end = static_cast<std::uint32_t>(end);
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size() - 1);
        }

        Vec3d lo(pts_[order_[begin]]);
        Vec3d hi = lo;
        for (std::size_t i = begin + 1; i < end; ++i) {
            const Vec3d p(pts_[order_[i]]);
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        const Vec3d extent = hi - lo;
        int axis = 0;
        if (extent.y > extent.x) axis = 1;
        if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;

        const std::size_t mid = (begin + end) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) {
                             return coord(a, axis) != coord(b, axis)
                                        ? coord(a, axis) < coord(b, axis)
                                        : a < b;
                         });

        node.axis = axis;
        node.split = coord(order_[mid], axis);
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    double coord(std::uint32_t idx, int axis) const {
        const Vec3f& p = pts_[idx];
        return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
    }

    void search(int node_id, const Vec3f& query, std::uint32_t self, KBest& best) const {
        const Node& node = nodes_[node_id];
        if (node.axis < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const std::uint32_t idx = order_[i];
                if (idx == self) continue;
                best.offer({squared_distance(query, pts_[idx]), idx});
            }
            return;
        }

        const double q = axis_value(query, node.axis);
        const double plane = q - node.split;
        const int near = plane < 0 ? node.left : node.right;
        const int far = plane < 0 ? node.right : node.left;

        search(near, query, self, best);
        // A far-side point can tie the current worst and win on index, so
        // only a strictly larger plane distance allows pruning.
        if (!best.full() || plane * plane <= best.worst().d2) {
            search(far, query, self, best);
        }
    }

    static double axis_value(const Vec3f& p, int axis) {
        return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
    }

    const std::vector<Vec3f>& pts_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    int root_ = kNoChild;
};

}  // namespace

NeighborIndex knn_indexed(const PointCloud& cloud, std::uint32_t k) {
    check_knn_args(cloud, k);
    const std::size_t n = cloud.size();

    KdTree tree(cloud.points);
    NeighborIndex out;
    out.k = k;
    out.indices.reserve(n * k);

    KBest best(k);
    for (std::size_t i = 0; i < n; ++i) {
        tree.knn(cloud.points[i], static_cast<std::uint32_t>(i), best);
        best.emit_sorted(out.indices);
    }
    return out;
}

NeighborIndex ball_query(const PointCloud& cloud, const PointCloud& centers, double radius,
                         std::uint32_t max_k) {
    cloud.validate();
    centers.validate();
    if (!(radius > 0.0)) {
        raise(ErrorCode::invalid_argument, "ball query radius must be positive");
    }
    if (max_k < 1) {
        raise(ErrorCode::invalid_argument, "ball query max_k must be at least 1");
    }

    const double r2 = radius * radius;
    NeighborIndex out;
    out.k = max_k;
    out.indices.reserve(centers.size() * max_k);

    std::vector<Candidate> hits;
    for (const auto& c : centers.points) {
        hits.clear();
        Candidate nearest{std::numeric_limits<double>::infinity(), 0};
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            const Candidate cand{squared_distance(c, cloud.points[j]),
                                 static_cast<std::uint32_t>(j)};
            if (cand < nearest) nearest = cand;
            if (cand.d2 <= r2) hits.push_back(cand);
        }
        std::sort(hits.begin(), hits.end());
        if (hits.size() > max_k) hits.resize(max_k);

        const std::uint32_t pad = hits.empty() ? nearest.index : hits.front().index;
        for (std::uint32_t j = 0; j < max_k; ++j) {
            out.indices.push_back(j < hits.size() ? hits[j].index : pad);
        }
    }
    return out;
}

std::vector<std::uint32_t> farthest_point_sampling(const PointCloud& cloud, std::size_t m,
                                                   std::size_t start) {
    cloud.validate();
    const std::size_t n = cloud.size();
    if (m < 1 || m > n) {
        raise(ErrorCode::invalid_argument, "sample count must satisfy 1 <= m <= N");
    }
    if (start >= n) {
        raise(ErrorCode::invalid_argument, "start index out of range");
    }

    std::vector<std::uint32_t> picked;
    picked.reserve(m);
    picked.push_back(static_cast<std::uint32_t>(start));

    std::vector<double> min_d2(n);
    for (std::size_t j = 0; j < n; ++j) {
        min_d2[j] = squared_distance(cloud.points[start], cloud.points[j]);
    }

    while (picked.size() < m) {
        std::size_t best = 0;
        double best_d2 = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (min_d2[j] > best_d2) {  // strict: ties keep the smaller index
                best_d2 = min_d2[j];
                best = j;
            }
        }
        picked.push_back(static_cast<std::uint32_t>(best));
        for (std::size_t j = 0; j < n; ++j) {
            min_d2[j] = std::min(min_d2[j], squared_distance(cloud.points[best], cloud.points[j]));
        }
    }
    return picked;
}

PointCloud grid_sampling(const PointCloud& cloud, double cell) {
    cloud.validate();
    if (!(cell > 0.0)) {
        raise(ErrorCode::invalid_argument, "grid cell size must be positive");
    }

    struct Accum {
        Vec3d sum;
        std::vector<double> attr_sum;
        std::size_t count = 0;
    };
    using Key = std::array<std::int64_t, 3>;
    std::map<Key, Accum> voxels;  // ordered: output follows (ix, iy, iz)

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3d p(cloud.points[i]);
        const Key key{static_cast<std::int64_t>(std::floor(p.x / cell)),
                      static_cast<std::int64_t>(std::floor(p.y / cell)),
                      static_cast<std::int64_t>(std::floor(p.z / cell))};
        Accum& a = voxels[key];
        if (a.count == 0 && cloud.attr_dim > 0) a.attr_sum.assign(cloud.attr_dim, 0.0);
        a.sum = a.sum + p;
        for (std::size_t c = 0; c < cloud.attr_dim; ++c) {
            a.attr_sum[c] += cloud.attrs[i * cloud.attr_dim + c];
        }
        ++a.count;
    }

    PointCloud out;
    out.attr_dim = cloud.attr_dim;
    out.points.reserve(voxels.size());
    for (const auto& [key, a] : voxels) {
        const double inv = 1.0 / static_cast<double>(a.count);
        out.points.push_back(Vec3f(a.sum * inv));
        for (std::size_t c = 0; c < cloud.attr_dim; ++c) {
            out.attrs.push_back(static_cast<float>(a.attr_sum[c] * inv));
        }
    }
    return out;
}

double azimuth(const Vec3d& offset) {
    if (offset.x == 0.0 && offset.y == 0.0) return 0.0;
    double phi = std::atan2(offset.y, offset.x);
    if (phi < 0.0) phi += 2.0 * M_PI;
    return phi;
}

std::vector<std::uint32_t> sort_counterclockwise(const Vec3f& center,
                                                 std::span<const Vec3f> neighbors) {
    struct Key {
        double phi, theta, dist;
        std::uint32_t index;
    };
    std::vector<Key> keys;
    keys.reserve(neighbors.size());
    for (std::uint32_t i = 0; i < neighbors.size(); ++i) {
        const Vec3d d = Vec3d(neighbors[i]) - Vec3d(center);
        const double rho = d.norm();
        const double theta =
            rho > 0.0 ? std::acos(std::clamp(d.z / rho, -1.0, 1.0)) : 0.0;
        keys.push_back({azimuth(d), theta, rho, i});
    }
    std::stable_sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.phi != b.phi) return a.phi < b.phi;
        if (a.theta != b.theta) return a.theta < b.theta;
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.index < b.index;
    });

    std::vector<std::uint32_t> order;
    order.reserve(keys.size());
    for (const auto& key : keys) order.push_back(key.index);
    return order;
}

}  // namespace repsurf
