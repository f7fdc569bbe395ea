"""Generate the bundled 3-minute synthetic danmaku log.

The timeline is scripted in phases so the default settings produce an
interesting caption plan: calm intro, a positive hype burst over a cooking
segment, a scare burst over a horror-game segment, a confusion stretch, a
second praise burst, and a quiet wind-down. Regenerating with the same seed
reproduces the file byte for byte.
"""

from __future__ import annotations

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src/impactcap/data/sample_log.xml"
SEED = 2024

# (start_s, end_s, messages_per_s, text pool)
PHASES = [
    (0, 24, 0.25, [
        "来了来了", "现在开始", "坐等", "前排", "刚到", "今天做什么",
    ]),
    (24, 44, 1.3, [
        "666", "太强了", "刀工太强了", "这刀工绝了", "优雅", "摆盘好看",
        "厉害厉害", "学到了", "火候完美", "大佬666", "好帅", "切得真快",
    ]),
    (44, 68, 0.4, [
        "哈哈哈哈", "笑死我了", "好香啊", "饿了", "看饿了", "哈哈哈",
    ]),
    (68, 94, 1.2, [
        "吓死我了", "太吓人了", "有点吓人", "这鬼屋太离谱了", "不敢看了",
        "心脏受不了", "救命", "吓人", "这机关吓人", "别进去啊",
    ]),
    (94, 118, 0.9, [
        "什么情况", "怎么回事", "没想到啊", "原来如此", "原来是这样",
        "竟然是他", "反转了", "惊了",
    ]),
    (118, 144, 1.1, [
        "恭喜恭喜", "太强了", "666", "神仙操作", "感谢主播", "厉害",
        "完美通关", "优雅", "大佬大佬", "学到了",
    ]),
    (144, 180, 0.2, [
        "下次见", "谢谢观看", "晚安", "下次再来",
    ]),
]

MODES = [1, 1, 1, 1, 1, 1, 4, 5]  # mostly scrolling


def main() -> None:
    rng = random.Random(SEED)
    rows = []
    for start, end, rate, pool in PHASES:
        n = round((end - start) * rate)
        times = sorted(rng.uniform(start, end) for _ in range(n))
        for t in times:
            rows.append((round(t, 2), rng.choice(pool), rng.choice(MODES)))
    rows.sort()
    parts = ["<i>", "<chatid>sample-3min</chatid>"]
    for i, (t, text, mode) in enumerate(rows, start=1):
        wall = 1_700_000_000 + int(t)
        parts.append(
            f'<d p="{t},{mode},25,16777215,{wall},0,u{i % 7},{i}">{text}</d>'
        )
    parts.append("</i>")
    OUT.write_text("\n".join(parts) + "\n", "utf-8")
    print(f"{len(rows)} messages -> {OUT}")


if __name__ == "__main__":
    main()
