"""
Newline-delimited scoring service over stdio or TCP.

Lines are read from an asyncio stream and scored on a bounded thread pool;
responses are written as soon as they are ready, so they may come back out
of order (the request id is the correlation key). On SIGINT/SIGTERM the
service stops reading, finishes in-flight requests and exits.
"""

import asyncio
import logging
import signal
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Awaitable, Callable, Optional

from src.service.protocol import ERROR_LINE_TOO_LONG, ScoringDefaults, error_line, handle_line

logger = logging.getLogger(__name__)

WriteFn = Callable[[bytes], Awaitable[None]]

DEFAULT_MAX_LINE_BYTES = 16 * 1024 * 1024


async def read_request_line(reader: asyncio.StreamReader) -> tuple[Optional[bytes], bool]:
    """
    Next line from reader as (line, oversized).

    An oversized line is discarded up to its newline and reported as
    (b"", True). At end of stream returns (None, False).
    """
    skipping = False
    while True:
        try:
            return await reader.readuntil(b"\n"), skipping
        except asyncio.IncompleteReadError as e:
            if skipping:
                return b"", True
            return (e.partial or None), False
        except asyncio.LimitOverrunError as e:
            await reader.readexactly(e.consumed)
            skipping = True


class ScoringService:
    def __init__(
        self,
        defaults: Optional[ScoringDefaults] = None,
        workers: int = 4,
        max_line_bytes: int = DEFAULT_MAX_LINE_BYTES,
    ):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.defaults = defaults or ScoringDefaults()
        self.workers = workers
        self.max_line_bytes = max_line_bytes
        self._executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="sgkit-score")
        self._stopping: Optional[asyncio.Event] = None
        self.handled = 0

    def _stop_event(self) -> asyncio.Event:
        if self._stopping is None:
            self._stopping = asyncio.Event()
        return self._stopping

    def stop(self) -> None:
        """Stop reading new requests; in-flight ones are still answered."""
        logger.info("Shutdown requested, draining in-flight requests")
        self._stop_event().set()

    async def _next_line(self, reader: asyncio.StreamReader) -> tuple[Optional[bytes], bool]:
        stopping = self._stop_event()
        if stopping.is_set():
            return None, False
        read = asyncio.ensure_future(read_request_line(reader))
        stop = asyncio.ensure_future(stopping.wait())
        done, _ = await asyncio.wait({read, stop}, return_when=asyncio.FIRST_COMPLETED)
        stop.cancel()
        if read in done:
            return read.result()
        read.cancel()
        return None, False

    async def process_stream(self, reader: asyncio.StreamReader, write: WriteFn) -> int:
        """
        Answer every request line from reader until EOF or stop().

        Returns the number of lines answered. Blank lines are ignored.
        """
        loop = asyncio.get_running_loop()
        slots = asyncio.Semaphore(self.workers * 2)
        write_lock = asyncio.Lock()
        pending: set["asyncio.Task[None]"] = set()
        count = 0

        async def respond(line: bytes, oversized: bool) -> None:
            try:
                if oversized:
                    text = error_line(ERROR_LINE_TOO_LONG, f"request line exceeds {self.max_line_bytes} bytes")
                else:
                    text = await loop.run_in_executor(self._executor, handle_line, line, self.defaults)
                async with write_lock:
                    await write(text.encode("utf-8") + b"\n")
            finally:
                slots.release()

        while True:
            line, oversized = await self._next_line(reader)
            if line is None:
                break
            if not oversized and not line.strip():
                continue
            await slots.acquire()
            task = asyncio.create_task(respond(line, oversized))
            pending.add(task)
            task.add_done_callback(pending.discard)
            count += 1

        if pending:
            await asyncio.gather(*pending)
        self.handled += count
        return count

    def _install_signal_handlers(self) -> None:
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(sig, self.stop)
            except (NotImplementedError, RuntimeError):
                logger.debug("Signal handlers are not available on this platform")

    async def serve_stdio(self) -> int:
        loop = asyncio.get_running_loop()
        reader = asyncio.StreamReader(limit=self.max_line_bytes)
        try:
            await loop.connect_read_pipe(lambda: asyncio.StreamReaderProtocol(reader), sys.stdin)
        except (ValueError, OSError):
            # stdin is a regular file: feed the reader from a thread
            def pump() -> None:
                for chunk in iter(lambda: sys.stdin.buffer.read(65536), b""):
                    loop.call_soon_threadsafe(reader.feed_data, chunk)
                loop.call_soon_threadsafe(reader.feed_eof)

            loop.run_in_executor(None, pump)

        async def write(data: bytes) -> None:
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()

        self._install_signal_handlers()
        return await self.process_stream(reader, write)

    async def serve_tcp(self, host: str, port: int) -> None:
        """
        Serve TCP clients until stop().

        Raises:
            OSError: if the address cannot be bound.
        """
        async def client(reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
            peer = writer.get_extra_info("peername")
            logger.info("Client connected: %s", peer)

            async def write(data: bytes) -> None:
                writer.write(data)
                await writer.drain()

            try:
                answered = await self.process_stream(reader, write)
                logger.info("Client %s done: %d request(s)", peer, answered)
            except (ConnectionError, asyncio.IncompleteReadError) as e:
                logger.warning("Client %s dropped: %s", peer, e)
            finally:
                writer.close()

        server = await asyncio.start_server(client, host, port, limit=self.max_line_bytes)
        addresses = ", ".join(str(s.getsockname()) for s in server.sockets)
        logger.info("Scoring service listening on %s", addresses)
        self._install_signal_handlers()
        async with server:
            await self._stop_event().wait()
        logger.info("Scoring service stopped after %d request(s)", self.handled)

    def close(self) -> None:
        self._executor.shutdown(wait=True)


def run_service(
    defaults: ScoringDefaults,
    transport: str = "stdio",
    host: str = "127.0.0.1",
    port: int = 8765,
    workers: int = 4,
    max_line_bytes: int = DEFAULT_MAX_LINE_BYTES,
) -> int:
    """Run the service until EOF (stdio) or a shutdown signal; returns requests answered."""
    service = ScoringService(defaults, workers, max_line_bytes)
    t0 = time.monotonic()
    try:
        if transport == "stdio":
            asyncio.run(service.serve_stdio())
        elif transport == "tcp":
            asyncio.run(service.serve_tcp(host, port))
        else:
            raise ValueError(f"Unknown transport {transport!r}")
    finally:
        service.close()
    elapsed = time.monotonic() - t0
    logger.info(
        "Answered %d request(s) in %.1fs (%.0f/s)",
        service.handled, elapsed, service.handled / elapsed if elapsed > 0 else 0.0,
    )
    return service.handled
