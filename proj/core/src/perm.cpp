#include "fcalc/perm.hpp"

#include <algorithm>

#include "fcalc/errors.hpp"

namespace fcalc {

bool is_permutation(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 0 || v >= (int)p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Perm perm_identity(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

Perm perm_compose(const Perm& sigma, const Perm& pi) {
    if (sigma.size() != pi.size()) throw ValidationError("permutation size mismatch");
    Perm out(pi.size());
    for (size_t i = 0; i < pi.size(); ++i) out[i] = sigma[pi[i]];
    return out;
}

Perm perm_inverse(const Perm& p) {
    Perm out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[p[i]] = i;
    return out;
}

int perm_sign(const Perm& p) {
    int s = 1;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p = perm_identity(n);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<int> cycle_type(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    std::vector<int> parts;
    for (size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (size_t j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            ++len;
        }
        parts.push_back(len);
    }
    std::sort(parts.rbegin(), parts.rend());
    return parts;
}

namespace {

void partitions_rec(int n, int max_part, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int part = std::min(n, max_part); part >= 1; --part) {
        cur.push_back(part);
        partitions_rec(n - part, part, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    partitions_rec(n, n, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

Perm canonical_of_cycle_type(const std::vector<int>& partition) {
    int n = 0;
    for (int part : partition) {
        if (part < 1) throw ValidationError("partition parts must be positive");
        n += part;
    }
    Perm p(n);
    int base = 0;
    for (int part : partition) {
        for (int i = 0; i < part; ++i) p[base + i] = base + (i + 1) % part;
        base += part;
    }
    return p;
}

std::string partition_key(const std::vector<int>& partition) {
    std::string s;
    for (size_t i = 0; i < partition.size(); ++i) {
        if (i) s += "+";
        s += std::to_string(partition[i]);
    }
    return s;
}

Perm transposition_gen(int n) {
    Perm p = perm_identity(n);
    if (n >= 2) std::swap(p[0], p[1]);
    return p;
}

Perm full_cycle_gen(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = (i + 1) % n;
    return p;
}

}  // namespace fcalc
