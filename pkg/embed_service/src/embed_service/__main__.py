"""Run the embedding service: python3 -m embed_service [--port N]
[--model tiny-32x4-s7] [--replay DIR | --record DIR]."""

import argparse

import uvicorn

from .service import MODEL_ENV_VAR, create_app


def main() -> None:
    parser = argparse.ArgumentParser(prog="embed_service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8400)
    parser.add_argument(
        "--model", help=f"model id (default from ${MODEL_ENV_VAR} or built-in)"
    )
    parser.add_argument("--replay", help="serve recorded responses from this directory")
    parser.add_argument("--record", help="also write responses here as replay fixtures")
    args = parser.parse_args()
    app = create_app(
        model_id=args.model, replay_dir=args.replay, record_dir=args.record
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")


if __name__ == "__main__":
    main()
