"""Command-line entry points: serve, fit-lda, analyze, replay, gen-caption."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import topics, wire
from .config import ConfigError, ServiceConfig, load_config
from .emotion import LABEL_INDEX, LexiconClassifier, load_lexicon
from .engine import (
    AdminSettings,
    SettingsError,
    assign_window,
    plan_captions,
    summarize_window,
)
from .generate import (
    CaptionRequest,
    HttpChatClient,
    Pov,
    ResponseStyle,
    generate_caption,
)
from .ingest import MalformedXml, parse_bilibili_xml
from .replay import INSTANT, replay_log
from .topics import Theme


def _load_log(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise SystemExit(f"cannot read {path}: {exc}")
    try:
        return parse_bilibili_xml(data)
    except MalformedXml as exc:
        raise SystemExit(f"{path}: {exc}")


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    if args.config:
        try:
            config = load_config(args.config)
        except (OSError, ConfigError) as exc:
            raise SystemExit(f"config: {exc}")
    else:
        config = ServiceConfig()
    if args.port is not None:
        config = ServiceConfig.from_dict(config.to_dict() | {"port": args.port})
    if args.host is not None:
        config = ServiceConfig.from_dict(config.to_dict() | {"host": args.host})
    uvicorn.run(create_app(config), host=config.host, port=config.port,
                log_level="info")
    return 0


def cmd_fit_lda(args) -> int:
    log = _load_log(args.log)
    corpus = topics.corpus_from_messages(log.messages)
    try:
        model = topics.fit_lda(corpus, k=args.k, alpha=args.alpha, beta=args.beta,
                               iterations=args.iters, seed=args.seed)
    except topics.TopicsError as exc:
        raise SystemExit(str(exc))
    topics.save_model(model, args.out)
    print(f"fitted K={model.k} on {len(corpus.documents)} documents, "
          f"{int(model.topic_totals.sum())} tokens -> {args.out}")
    for k in range(model.k):
        words = topics.top_words(model, k, 5)
        print(f"  topic {k}: {' '.join(words)}")
    return 0


def cmd_analyze(args) -> int:
    log = _load_log(args.log)
    settings = AdminSettings(window_duration_s=args.window)
    classifier = LexiconClassifier(load_lexicon(args.lexicon or None))
    model = topics.load_model(args.model) if args.model else None
    grouped: dict[int, list] = {}
    for m in log.messages:
        grouped.setdefault(assign_window(m.video_time_ms, args.window), []).append(m)
    summaries = [
        summarize_window(grouped[i], classifier, model, settings,
                         seed=args.seed, window_index=i)
        for i in sorted(grouped)
    ]
    out = wire.serialize_summaries(summaries)
    if args.out:
        Path(args.out).write_text(out, "utf-8")
        print(f"{len(summaries)} windows -> {args.out}")
    else:
        sys.stdout.write(out)
    return 0


def _load_settings_arg(path: str | None) -> AdminSettings:
    if not path:
        return AdminSettings()
    try:
        with open(path, encoding="utf-8") as fh:
            return AdminSettings.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, SettingsError) as exc:
        raise SystemExit(f"settings: {exc}")


def cmd_replay(args) -> int:
    log = _load_log(args.log)
    settings = _load_settings_arg(args.settings)
    classifier = LexiconClassifier(load_lexicon(args.lexicon or None))
    if args.model:
        model = topics.load_model(args.model)
    else:
        # Two passes over the same log: fit first, then stream.
        corpus = topics.corpus_from_messages(log.messages)
        try:
            model = topics.fit_lda(corpus, seed=args.seed)
        except topics.EmptyCorpus:
            model = None
    speed = args.speed if args.speed == INSTANT else float(args.speed)
    result = replay_log(log, settings, model, classifier, speed=speed,
                        seed=args.seed)
    plan_text = wire.serialize_plan(result.plan)
    if args.out:
        Path(args.out).write_text(plan_text, "utf-8")
    else:
        sys.stdout.write(plan_text)
    if args.transcript:
        Path(args.transcript).write_text(result.transcript, "utf-8")
    print(f"replayed {result.message_count} messages, "
          f"{len(result.plan)} captions fired", file=sys.stderr)
    return 0


def cmd_gen_caption(args) -> int:
    theme_words = tuple(w for w in (args.theme or "").split(",") if w)
    theme = Theme(topic=0, top_words=theme_words, support=len(theme_words))
    try:
        style = ResponseStyle(args.style)
        pov = Pov(args.pov)
    except ValueError as exc:
        raise SystemExit(str(exc))
    if args.dominant not in LABEL_INDEX:
        raise SystemExit(f"unknown emotion label: {args.dominant}")
    request = CaptionRequest(
        style=style, pov=pov, theme=theme,
        dominant_label=LABEL_INDEX[args.dominant], seed=args.seed,
    )
    client = None
    if args.backend == "llm":
        if not args.endpoint:
            raise SystemExit("--endpoint is required with --backend llm")
        client = HttpChatClient(args.endpoint, args.auth_token)
    caption = generate_caption(request, client)
    print(json.dumps(
        {"text": caption.text, "style": caption.style.value,
         "pov": caption.pov.value, "source": caption.source.value},
        ensure_ascii=False,
    ))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impactcap",
        description="Danmaku moderation service generating styled overlay captions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP/websocket service")
    p.add_argument("--config", default="", help="JSON config file")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("fit-lda", help="fit a topic model from a danmaku XML log")
    p.add_argument("log")
    p.add_argument("--k", type=int, default=topics.DEFAULT_K)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=topics.DEFAULT_BETA)
    p.add_argument("--iters", type=int, default=topics.DEFAULT_FIT_ITERATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit_lda)

    p = sub.add_parser("analyze", help="summarize a log window by window")
    p.add_argument("log")
    p.add_argument("--window", type=int, choices=(8, 12), default=8)
    p.add_argument("--model", default="", help="fitted LDA model JSON")
    p.add_argument("--lexicon", default="", help="custom lexicon JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("replay", help="replay a log and emit its caption plan")
    p.add_argument("log")
    p.add_argument("--settings", default="", help="AdminSettings JSON file")
    p.add_argument("--model", default="", help="fitted LDA model JSON")
    p.add_argument("--lexicon", default="")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--speed", default=INSTANT,
                   help=f"wall-clock factor or {INSTANT!r}")
    p.add_argument("--out", default="", help="plan JSONL path")
    p.add_argument("--transcript", default="", help="event transcript path")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("gen-caption", help="generate one caption (debugging)")
    p.add_argument("--style", required=True,
                   choices=[s.value for s in ResponseStyle])
    p.add_argument("--pov", required=True, choices=[v.value for v in Pov])
    p.add_argument("--theme", default="", help="comma-separated theme words")
    p.add_argument("--dominant", default="neutral", help="emotion label name")
    p.add_argument("--backend", choices=("template", "llm"), default="template")
    p.add_argument("--endpoint", default="", help="chat endpoint for llm backend")
    p.add_argument("--auth-token", default="")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_caption)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
