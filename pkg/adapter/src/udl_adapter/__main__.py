"""Command-line entry point: udl-adapter --host 127.0.0.1 --port 8080."""

from __future__ import annotations

import argparse

import uvicorn

from udl_adapter.service import ServiceModels, create_app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="udl-adapter",
        description="serve embeddings, entity counts, and query generation over HTTP",
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--dim", type=int, default=256, help="embedding width")
    args = parser.parse_args(argv)

    app = create_app(ServiceModels.standard(dim=args.dim))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
