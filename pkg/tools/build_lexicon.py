"""Write src/impactcap/data/lexicon.json from the curated tables below.

Keys must be surfaces the tokenizer can emit: two-char CJK bigrams, single
CJK chars, lowercased latin words, or digit runs.
"""

import json
import pathlib

# label -> {surface: weight}. Multi-label surfaces are merged afterwards.
TABLES = {
    "admiration": {
        "大神": 1.0, "厉害": 1.0, "牛逼": 1.5, "牛批": 1.5, "太强": 1.5,
        "膜拜": 1.2, "佩服": 1.0, "致敬": 1.0, "神仙": 1.2, "无敌": 1.2,
        "霸气": 1.0, "大佬": 1.0, "优雅": 1.2, "完美": 1.0, "好帅": 1.2,
        "漂亮": 1.0, "绝了": 1.5, "封神": 1.5, "天才": 1.2, "强啊": 1.2,
        "神": 1.0, "强": 1.0, "帅": 1.0, "稳": 0.8,
        "respect": 1.0, "goat": 1.2, "legend": 1.2, "amazing": 1.2,
        "impressive": 1.0, "pro": 0.8,
        "666": 1.2, "6666": 1.2, "66666": 1.2, "666666": 1.2, "66": 0.8,
    },
    "amusement": {
        "哈哈": 1.0, "笑死": 1.5, "笑了": 1.0, "好笑": 1.0, "搞笑": 1.0,
        "幽默": 1.0, "逗死": 1.2, "嘻嘻": 0.8, "笑疯": 1.5, "爆笑": 1.2,
        "草": 1.0, "乐": 0.8, "哏": 0.8,
        "lol": 1.0, "lmao": 1.2, "haha": 1.0, "hahaha": 1.2, "rofl": 1.2,
        "xd": 0.8, "funny": 1.0,
        "233": 1.0, "2333": 1.0, "23333": 1.0, "233333": 1.0,
    },
    "anger": {
        "气死": 1.5, "愤怒": 1.2, "可恶": 1.0, "混蛋": 1.5, "王八": 1.2,
        "滚蛋": 1.5, "去死": 2.0, "闭嘴": 1.2, "怒了": 1.2, "暴怒": 1.5,
        "滚": 1.2, "呸": 1.0,
        "rage": 1.2, "angry": 1.0, "fury": 1.2,
    },
    "annoyance": {
        "烦人": 1.0, "讨厌": 1.0, "无语": 1.0, "好烦": 1.2, "吵死": 1.2,
        "闹心": 1.0, "烦死": 1.5, "够了": 1.0, "别吵": 1.0, "聒噪": 1.0,
        "喷子": 1.2, "刷屏": 0.8,
        "annoying": 1.0, "ugh": 0.8, "meh": 0.6, "spam": 0.8,
    },
    "approval": {
        "同意": 1.0, "赞成": 1.0, "支持": 1.0, "没错": 1.0, "对的": 1.0,
        "正确": 1.0, "合理": 0.8, "有理": 0.8, "靠谱": 1.0, "好评": 1.0,
        "对": 0.8, "赞": 1.0, "顶": 0.8,
        "agree": 1.0, "true": 0.8, "exactly": 1.0, "yes": 0.6, "yep": 0.6,
    },
    "caring": {
        "保重": 1.0, "注意": 0.8, "小心": 0.8, "安全": 0.8, "保护": 0.8,
        "照顾": 0.8, "心疼": 1.2, "抱抱": 1.0, "暖心": 1.2, "辛苦": 1.0,
        "别怕": 1.0, "温柔": 0.8,
        "hug": 1.0, "care": 0.8, "stay": 0.4,
    },
    "confusion": {
        "懵了": 1.2, "疑惑": 1.0, "困惑": 1.0, "迷糊": 1.0, "不懂": 1.0,
        "没懂": 1.0, "为啥": 0.8, "为何": 0.8, "问号": 1.0, "看晕": 1.0,
        "confused": 1.0, "huh": 0.8, "what": 0.6,
    },
    "curiosity": {
        "好奇": 1.2, "想看": 1.0, "求名": 0.8, "揭秘": 0.8, "探索": 0.8,
        "啥是": 0.8, "在哪": 0.6, "谁啊": 0.6, "后续": 0.6,
        "curious": 1.0, "interesting": 0.8,
    },
    "desire": {
        "想要": 1.0, "好想": 1.2, "渴望": 1.2, "求求": 1.0, "想吃": 1.0,
        "想去": 1.0, "羡慕": 1.0, "馋了": 1.2, "眼馋": 1.0, "梦想": 0.8,
        "want": 0.8, "wish": 0.8,
    },
    "disappointment": {
        "失望": 1.2, "遗憾": 1.0, "可惜": 1.0, "白等": 1.0, "烂尾": 1.2,
        "拉胯": 1.2, "无奈": 0.8, "心凉": 1.2, "唉": 0.8, "哎": 0.6,
        "disappointed": 1.2, "sigh": 0.8,
    },
    "disapproval": {
        "反对": 1.0, "不行": 0.8, "不妥": 0.8, "差评": 1.2, "垃圾": 1.2,
        "辣鸡": 1.2, "低级": 1.0, "离谱": 1.0, "敷衍": 1.0, "扣分": 0.8,
        "举报": 1.0, "毒瘤": 1.2,
        "disagree": 1.0, "nope": 0.8, "bad": 0.8, "trash": 1.2,
    },
    "disgust": {
        "恶心": 1.5, "反胃": 1.2, "油腻": 1.0, "恶臭": 1.5, "辣眼": 1.2,
        "变态": 1.2, "恶俗": 1.0, "呕": 1.0,
        "gross": 1.2, "disgusting": 1.5, "ew": 1.0, "yuck": 1.0,
    },
    "embarrassment": {
        "尴尬": 1.2, "丢脸": 1.2, "丢人": 1.2, "社死": 1.5, "脸红": 0.8,
        "害羞": 0.8, "羞耻": 1.2, "出丑": 1.0,
        "awkward": 1.0, "cringe": 1.2,
    },
    "excitement": {
        "激动": 1.2, "兴奋": 1.2, "燃爆": 1.5, "高能": 1.5, "刺激": 1.0,
        "热血": 1.2, "沸腾": 1.2, "起飞": 1.0, "冲啊": 1.2, "名场": 1.0,
        "冲": 0.8, "燃": 1.0,
        "hype": 1.2, "pog": 1.0, "poggers": 1.2, "exciting": 1.0,
    },
    "fear": {
        "害怕": 1.2, "恐怖": 1.2, "吓人": 1.2, "吓死": 1.5, "可怕": 1.2,
        "恐惧": 1.2, "瘆人": 1.2, "毛骨": 1.2, "危险": 0.8, "快跑": 1.0,
        "scary": 1.2, "scared": 1.2, "horror": 1.0,
    },
    "gratitude": {
        "感谢": 1.2, "谢谢": 1.2, "多谢": 1.0, "感恩": 1.2, "谢了": 1.0,
        "大恩": 1.0, "感动": 0.8, "三连": 0.8,
        "thanks": 1.0, "thank": 1.0, "thx": 0.8, "ty": 0.6,
    },
    "grief": {
        "哀悼": 1.5, "悲痛": 1.5, "痛哭": 1.2, "节哀": 1.2, "永别": 1.5,
        "去世": 1.2, "离世": 1.2, "默哀": 1.2,
        "rip": 1.0, "mourn": 1.2,
    },
    "joy": {
        "开心": 1.2, "快乐": 1.2, "高兴": 1.0, "愉快": 1.0, "幸福": 1.0,
        "爽了": 1.2, "舒服": 0.8, "真爽": 1.2, "美滋": 1.0, "恭喜": 1.0,
        "爽": 1.0,
        "happy": 1.0, "joy": 1.0, "yay": 1.0,
    },
    "love": {
        "爱了": 1.5, "喜欢": 1.0, "最爱": 1.2, "心动": 1.2, "深爱": 1.2,
        "真爱": 1.2, "老婆": 1.0, "亲亲": 1.0, "么么": 1.0, "表白": 1.0,
        "爱": 1.0,
        "love": 1.2, "lovely": 1.0,
    },
    "nervousness": {
        "紧张": 1.2, "忐忑": 1.2, "不安": 1.0, "心慌": 1.2, "手抖": 1.0,
        "发抖": 1.0, "焦虑": 1.2, "担心": 1.0, "捏汗": 1.0,
        "nervous": 1.2, "anxious": 1.2,
    },
    "optimism": {
        "希望": 1.0, "相信": 0.8, "看好": 1.0, "会好": 1.0, "前途": 0.8,
        "光明": 0.8, "必胜": 1.2, "能行": 1.0, "加油": 1.0, "未来": 0.6,
        "hopeful": 1.0, "hope": 0.8,
    },
    "pride": {
        "骄傲": 1.2, "自豪": 1.2, "争气": 1.0, "荣耀": 1.0, "光荣": 1.0,
        "扬眉": 1.0, "争光": 1.0, "国货": 0.6,
        "proud": 1.2, "pride": 1.0,
    },
    "realization": {
        "原来": 1.0, "懂了": 1.0, "明白": 0.8, "悟了": 1.2, "难怪": 1.0,
        "怪不": 1.0, "恍然": 1.2, "终于": 0.8, "真相": 0.8,
        "oh": 0.6, "ohh": 0.8,
    },
    "relief": {
        "还好": 1.0, "幸好": 1.2, "虚惊": 1.2, "安心": 1.0, "放心": 1.0,
        "太好": 1.0, "没事": 0.8, "松气": 1.0,
        "relieved": 1.2, "phew": 1.0, "whew": 1.0,
    },
    "remorse": {
        "后悔": 1.2, "抱歉": 1.0, "对不": 1.0, "不起": 0.8, "道歉": 1.0,
        "愧疚": 1.2, "自责": 1.2, "早知": 0.8, "悔恨": 1.2,
        "sorry": 1.0, "regret": 1.2,
    },
    "sadness": {
        "难过": 1.2, "伤心": 1.2, "悲伤": 1.2, "哭了": 1.2, "泪目": 1.2,
        "心碎": 1.5, "委屈": 1.0, "心酸": 1.2, "呜呜": 1.0, "想哭": 1.2,
        "哭": 1.0, "惨": 1.0,
        "sad": 1.0, "cry": 1.0, "crying": 1.2,
        "555": 1.0, "5555": 1.0, "55555": 1.0,
    },
    "surprise": {
        "卧槽": 1.5, "我草": 1.5, "天哪": 1.2, "天啊": 1.2, "震惊": 1.2,
        "惊了": 1.2, "居然": 1.0, "竟然": 1.0, "没想": 1.0, "反转": 1.0,
        "突然": 0.8, "惊呆": 1.2,
        "哇": 1.0, "咦": 0.8, "诶": 0.6,
        "wow": 1.0, "omg": 1.2, "whoa": 1.0,
    },
    "neutral": {
        "这个": 1.0, "那个": 1.0, "就是": 1.0, "现在": 1.0, "时候": 1.0,
        "然后": 1.0, "视频": 1.0, "弹幕": 1.0, "大家": 1.0, "一下": 1.0,
        "可以": 1.0, "前方": 1.0, "普通": 1.0, "一般": 1.0, "场面": 1.0,
        "打卡": 1.0, "签到": 1.0, "路过": 1.0, "来了": 0.8, "第一": 0.8,
        "the": 1.0, "and": 1.0, "this": 1.0, "that": 1.0, "is": 1.0,
        "a": 1.0, "to": 1.0, "it": 1.0,
        "1": 1.0, "88": 1.0,
    },
}

# Slang that genuinely spans labels.
MULTI = {
    "牛逼": {"surprise": 0.3},
    "卧槽": {"admiration": 0.3},
    "笑死": {"joy": 0.3},
    "垃圾": {"disgust": 0.6},
    "辣鸡": {"disgust": 0.6},
    "傻逼": {"anger": 1.5, "disapproval": 0.8},
    "脑残": {"anger": 1.2, "disapproval": 0.8},
    "智障": {"anger": 1.2, "disapproval": 0.8},
    "废物": {"disapproval": 1.2, "anger": 0.6},
    "白痴": {"anger": 1.0, "disapproval": 0.8},
    "蠢货": {"anger": 1.0, "disapproval": 0.8},
    "noob": {"disapproval": 0.8, "annoyance": 0.6},
    "stupid": {"anger": 0.8, "disapproval": 0.8},
    "idiot": {"anger": 1.0, "disapproval": 0.8},
    "hate": {"anger": 1.0, "disgust": 0.5},
    "恭喜": {"approval": 0.5},
    "感动": {"joy": 0.5},
    "泪目": {"gratitude": 0.3},
    "羡慕": {"admiration": 0.5},
    "危险": {"caring": 0.5},
    "担心": {"caring": 0.5},
    "害羞": {"nervousness": 0.5},
    "离谱": {"surprise": 0.6},
    "wtf": {"anger": 0.8, "surprise": 0.8},
    "妈的": {"anger": 1.2, "annoyance": 0.5},
    "damn": {"anger": 0.6, "surprise": 0.4},
}


def build() -> dict:
    entries: dict[str, dict[str, float]] = {}
    for label, table in TABLES.items():
        for surface, weight in table.items():
            entries.setdefault(surface, {})[label] = weight
    for surface, extra in MULTI.items():
        entries.setdefault(surface, {})
        for label, weight in extra.items():
            entries[surface][label] = entries[surface].get(label, 0.0) + weight
    return {
        "version": "1",
        "entries": {k: dict(sorted(v.items())) for k, v in sorted(entries.items())},
    }


if __name__ == "__main__":
    out = pathlib.Path(__file__).resolve().parents[1] / "src/impactcap/data/lexicon.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    doc = build()
    out.write_text(json.dumps(doc, ensure_ascii=False, indent=1) + "\n", "utf-8")
    print(f"{len(doc['entries'])} entries -> {out}")
