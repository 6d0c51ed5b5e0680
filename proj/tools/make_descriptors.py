#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerate the bundled network descriptors under data/networks/.

The descriptors are plain geometry: the simulator recomputes all byte counts
and MAC totals itself and cross-checks the declared values, so this script is
the single source of truth for the shipped workloads.
"""
import json
import os

OUT_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "data", "networks")


def layer(name, kind, k, stride, c_in, c_out, h_in, w_in):
    if kind == "conv":
        wb = k * k * c_in * c_out
    elif kind in ("pointwise", "fc"):
        wb = c_in * c_out
    elif kind == "depthwise":
        wb = k * k * c_out
    else:  # residual_add
        wb = 0
    h_out = (h_in + stride - 1) // stride
    w_out = (w_in + stride - 1) // stride
    act_in = 2 * c_in * h_in * w_in if kind == "residual_add" else c_in * h_in * w_in
    return {
        "name": name,
        "kind": kind,
        "k": k,
        "stride": stride,
        "c_in": c_in,
        "c_out": c_out,
        "h_in": h_in,
        "w_in": w_in,
        "weight_bytes": wb,
        "act_in_bytes": act_in,
        "act_out_bytes": c_out * h_out * w_out,
    }


def repvgg(name, a, b):
    """Plain 3x3 stacks in five stages; stage depths 1/2/4/14/1; the final
    classifier always maps 1280 features to 1000 classes."""
    widths = [64, int(64 * a), int(128 * a), int(256 * a), int(512 * b)]
    depths = [1, 2, 4, 14, 1]
    layers = []
    h = 224
    c_prev = 3
    for s, (w, d) in enumerate(zip(widths, depths), start=1):
        for i in range(1, d + 1):
            stride = 2 if i == 1 else 1
            layers.append(layer(f"stage{s}_l{i}", "conv", 3, stride, c_prev, w, h, h))
            if stride == 2:
                h = (h + 1) // 2
            c_prev = w
    layers.append(layer("fc", "fc", 1, 1, 1280, 1000, 1, 1))
    return {"schema_version": 1, "name": name, "layers": layers}


def mobilenet_v2():
    """Inverted-bottleneck stacks (expand/depthwise/project); element-wise
    shortcut adds are folded into the surrounding blocks and global pooling
    into the classifier, so only MAC-bearing layers appear."""
    settings = [
        (1, 16, 1, 1),
        (6, 24, 2, 2),
        (6, 32, 3, 2),
        (6, 64, 4, 2),
        (6, 96, 3, 1),
        (6, 160, 3, 2),
        (6, 320, 1, 1),
    ]
    layers = [layer("stem", "conv", 3, 2, 3, 32, 224, 224)]
    h = 112
    c_prev = 32
    bn = 0
    for t, c, n, s in settings:
        for i in range(n):
            bn += 1
            stride = s if i == 0 else 1
            if t != 1:
                layers.append(layer(f"bn{bn}_exp", "pointwise", 1, 1, c_prev, c_prev * t, h, h))
            mid = c_prev * t
            layers.append(layer(f"bn{bn}_dw", "depthwise", 3, stride, mid, mid, h, h))
            if stride == 2:
                h = (h + 1) // 2
            layers.append(layer(f"bn{bn}_proj", "pointwise", 1, 1, mid, c, h, h))
            c_prev = c
    layers.append(layer("head", "pointwise", 1, 1, 320, 1280, h, h))
    layers.append(layer("classifier", "fc", 1, 1, 1280, 1000, 1, 1))
    return {"schema_version": 1, "name": "mobilenet_v2", "layers": layers}


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    nets = [
        repvgg("repvgg_a0", 0.75, 2.5),
        repvgg("repvgg_a1", 1.0, 2.5),
        repvgg("repvgg_a2", 1.5, 2.75),
        mobilenet_v2(),
    ]
    for net in nets:
        path = os.path.join(OUT_DIR, net["name"] + ".json")
        with open(path, "w") as f:
            json.dump(net, f, indent=2)
            f.write("\n")
        total_w = sum(l["weight_bytes"] for l in net["layers"])
        print(f"{net['name']}: {len(net['layers'])} layers, {total_w} weight bytes -> {path}")


if __name__ == "__main__":
    main()
