#include "fcalc/simplicial.hpp"

#include <algorithm>

#include "fcalc/errors.hpp"

namespace fcalc {

namespace {

bool valid_surjection(const std::vector<int>& s) {
    if (s.empty() || s.front() != 0) return false;
    for (size_t j = 0; j + 1 < s.size(); ++j) {
        int step = s[j + 1] - s[j];
        if (step != 0 && step != 1) return false;
    }
    return true;
}

DegenerateFace identity_face(int d, long id) {
    DegenerateFace f;
    f.surj.resize(static_cast<size_t>(d) + 1);
    for (int j = 0; j <= d; ++j) f.surj[static_cast<size_t>(j)] = j;
    f.base = id;
    return f;
}

}  // namespace

const DegenerateFace& SimplicialSet::face(int d, long id, int i) const {
    return faces.at(static_cast<size_t>(d)).at(static_cast<size_t>(id)).at(static_cast<size_t>(i));
}

DegenerateFace SimplicialSet::face_of(const DegenerateFace& f, int i) const {
    const int v = f.surj.at(static_cast<size_t>(i));
    std::vector<int> g = f.surj;
    g.erase(g.begin() + i);
    const size_t n = g.size();
    bool covered = (i > 0 && f.surj[static_cast<size_t>(i) - 1] == v) ||
                   (static_cast<size_t>(i) < n && f.surj[static_cast<size_t>(i) + 1] == v);
    if (covered) return {std::move(g), f.base};
    // the value v is gone: push the face into the base simplex
    const DegenerateFace& bf = face(f.base_dim(), f.base, v);
    DegenerateFace out;
    out.surj.resize(n);
    for (size_t j = 0; j < n; ++j) {
        int w = g[j] - (g[j] > v ? 1 : 0);
        out.surj[j] = bf.surj.at(static_cast<size_t>(w));
    }
    out.base = bf.base;
    return out;
}

void SimplicialSet::validate() const {
    if (faces.size() != counts.size())
        throw ValidationError("simplicial set: face table does not match the dimension list");
    for (int d = 0; d <= dim(); ++d) {
        if (counts[static_cast<size_t>(d)] < 0)
            throw ValidationError("simplicial set: negative simplex count");
        const auto& fd = faces[static_cast<size_t>(d)];
        if (d == 0) {
            if (!fd.empty())
                throw ValidationError("simplicial set: vertices must not carry faces");
            continue;
        }
        if (static_cast<long>(fd.size()) != counts[static_cast<size_t>(d)])
            throw ValidationError("simplicial set: face table has the wrong length in dimension " +
                                  std::to_string(d));
        for (long id = 0; id < counts[static_cast<size_t>(d)]; ++id) {
            const auto& row = fd[static_cast<size_t>(id)];
            if (static_cast<int>(row.size()) != d + 1)
                throw ValidationError("simplicial set: simplex " + std::to_string(id) +
                                      " in dimension " + std::to_string(d) + " needs " +
                                      std::to_string(d + 1) + " faces");
            for (const DegenerateFace& f : row) {
                if (static_cast<int>(f.surj.size()) != d || !valid_surjection(f.surj))
                    throw ValidationError("simplicial set: malformed face surjection in dimension " +
                                          std::to_string(d));
                if (f.base < 0 || f.base >= count(f.base_dim()))
                    throw ValidationError("simplicial set: face points at a missing simplex");
            }
        }
    }
    if (basepoint && (count(0) <= *basepoint || *basepoint < 0))
        throw ValidationError("simplicial set: basepoint is not a vertex");
    // simplicial identities on normalized data
    for (int d = 2; d <= dim(); ++d)
        for (long id = 0; id < count(d); ++id) {
            DegenerateFace top = identity_face(d, id);
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i) {
                    DegenerateFace a = face_of(face_of(top, j), i);
                    DegenerateFace b = face_of(face_of(top, i), j - 1);
                    if (!(a == b))
                        throw ValidationError(
                            "simplicial set: identity d_" + std::to_string(i) + " d_" +
                            std::to_string(j) + " fails on simplex " + std::to_string(id) +
                            " in dimension " + std::to_string(d));
                }
        }
    for (const auto& [name, per_dim] : actions) {
        if (static_cast<int>(per_dim.size()) != dim() + 1)
            throw ValidationError("simplicial set: action '" + name +
                                  "' does not cover every dimension");
        for (int d = 0; d <= dim(); ++d) {
            const auto& img = per_dim[static_cast<size_t>(d)];
            if (static_cast<long>(img.size()) != count(d))
                throw ValidationError("simplicial set: action '" + name +
                                      "' has the wrong length in dimension " + std::to_string(d));
            std::vector<bool> seen(img.size(), false);
            for (long v : img) {
                if (v < 0 || v >= count(d) || seen[static_cast<size_t>(v)])
                    throw ValidationError("simplicial set: action '" + name +
                                          "' is not a permutation in dimension " +
                                          std::to_string(d));
                seen[static_cast<size_t>(v)] = true;
            }
        }
    }
}

ChainComplex SimplicialSet::chains(const RingSpec& ring, bool augmented) const {
    ChainComplex c(ring);
    for (int d = 0; d <= dim(); ++d)
        if (count(d) > 0) c.set_rank(d, count(d));
    if (augmented) c.set_rank(-1, 1);
    for (int d = 1; d <= dim(); ++d) {
        if (count(d) == 0) continue;
        SparseMat m(count(d - 1), count(d));
        for (long id = 0; id < count(d); ++id)
            for (int i = 0; i <= d; ++i) {
                const DegenerateFace& f = face(d, id, i);
                if (!f.nondegenerate()) continue;
                m.add(f.base, id, (i % 2 == 0) ? Int(1) : Int(-1));
            }
        c.set_diff(d, std::move(m));
    }
    if (augmented && count(0) > 0) {
        SparseMat eps(1, count(0));
        for (long v = 0; v < count(0); ++v) eps.set(0, v, Int(1));
        c.set_diff(0, std::move(eps));
    }
    return c;
}

SimplicialSet SimplicialSet::point() {
    SimplicialSet k;
    k.counts = {1};
    k.faces = {{}};
    k.basepoint = 0;
    return k;
}

SimplicialSet SimplicialSet::circle() {
    SimplicialSet k;
    k.counts = {1, 1};
    k.faces = {{}, {{{{0}, 0}, {{0}, 0}}}};
    k.basepoint = 0;
    return k;
}

SimplicialSet SimplicialSet::interval() {
    SimplicialSet k;
    k.counts = {2, 1};
    k.faces = {{}, {{{{0}, 1}, {{0}, 0}}}};
    k.basepoint = 0;
    return k;
}

SimplicialSet SimplicialSet::boundary_simplex(int kk) {
    if (kk < 0) throw ValidationError("boundary-simplex: the dimension must be nonnegative");
    SimplicialSet k;
    if (kk == 0) return k;  // the boundary of a point is empty
    // nondegenerate d-simplices = (d+1)-subsets of {0..kk}, proper, in
    // lexicographic order
    std::vector<std::vector<std::vector<int>>> subsets(static_cast<size_t>(kk));
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (!cur.empty() && static_cast<int>(cur.size()) <= kk)
            subsets[cur.size() - 1].push_back(cur);
        if (static_cast<int>(cur.size()) > kk) return;
        for (int v = next; v <= kk; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    std::map<std::vector<int>, long> index;
    k.counts.resize(static_cast<size_t>(kk));
    k.faces.resize(static_cast<size_t>(kk));
    for (int d = 0; d < kk; ++d) {
        auto& level = subsets[static_cast<size_t>(d)];
        k.counts[static_cast<size_t>(d)] = static_cast<long>(level.size());
        for (long id = 0; id < static_cast<long>(level.size()); ++id)
            index[level[static_cast<size_t>(id)]] = id;
    }
    for (int d = 1; d < kk; ++d) {
        auto& level = subsets[static_cast<size_t>(d)];
        k.faces[static_cast<size_t>(d)].resize(level.size());
        for (long id = 0; id < static_cast<long>(level.size()); ++id)
            for (int i = 0; i <= d; ++i) {
                std::vector<int> sub = level[static_cast<size_t>(id)];
                sub.erase(sub.begin() + i);
                DegenerateFace f = identity_face(d - 1, index.at(sub));
                k.faces[static_cast<size_t>(d)][static_cast<size_t>(id)].push_back(std::move(f));
            }
    }
    k.basepoint = 0;
    return k;
}

SimplicialSet SimplicialSet::named(const std::string& name) {
    if (name == "point") return point();
    if (name == "circle") return circle();
    if (name == "interval") return interval();
    const std::string prefix = "boundary-simplex:";
    if (name.rfind(prefix, 0) == 0) {
        const std::string arg = name.substr(prefix.size());
        try {
            size_t used = 0;
            int kk = std::stoi(arg, &used);
            if (used == arg.size()) return boundary_simplex(kk);
        } catch (const std::exception&) {
        }
        throw ValidationError("boundary-simplex: bad dimension '" + arg + "'");
    }
    throw ValidationError("unknown simplicial set '" + name + "'");
}

}  // namespace fcalc
