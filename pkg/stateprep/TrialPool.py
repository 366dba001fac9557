"""
Worker processes for independent Monte Carlo trials.

Trials are cut into chunks; chunk i always draws from the stream
SeededStreams(seed).fork(*key, i), and results come back in chunk order, so
the outcome does not depend on how many workers ran it. With a single thread
the chunks run inline.
"""

# from the standard library
import logging
import multiprocessing

# our code
from stateprep.SeededStreams import SeededStreams

# Definitions aka constants
DEFAULT_CHUNK_SIZE = 250


class TrialPool:
    def __init__(self, threads=1, chunk_size=DEFAULT_CHUNK_SIZE):
        if threads < 1:
            raise ValueError("threads must be at least 1, got {}".format(threads))
        if chunk_size < 1:
            raise ValueError("chunk_size must be at least 1, got {}".format(chunk_size))
        self.threads = threads
        self.chunk_size = chunk_size
        self.workers = []

        if threads > 1:
            logging.info("Starting %d trial workers", threads)
            self.command_queue = multiprocessing.JoinableQueue()
            self.result_queue = multiprocessing.Queue()
            for number in range(threads):
                worker = multiprocessing.Process(
                    target=trial_worker,
                    name="trials-{}".format(number),
                    args=(self.command_queue, self.result_queue),
                )
                worker.daemon = True
                worker.start()
                self.workers.append(worker)


    def __enter__(self):
        return self


    def __exit__(self, exc_type, exc_value, traceback):
        self.shutdown()


    def chunks(self, trials):
        sizes = [self.chunk_size] * (trials // self.chunk_size)
        if trials % self.chunk_size:
            sizes.append(trials % self.chunk_size)
        return sizes


    def map_chunks(self, task, trials, seed, key=()):
        '''
        Run task(count, streams) on every chunk of the trials

        @param task - picklable callable, e.g. a functools.partial of a module
            level function
        @return list of the chunk results in chunk order
        '''
        sizes = self.chunks(trials)
        if not self.workers:
            root = SeededStreams(seed)
            return [task(count, root.fork(*key, index)) for index, count in enumerate(sizes)]

        for index, count in enumerate(sizes):
            self.command_queue.put((index, task, count, seed, tuple(key) + (index,)))

        results = [None] * len(sizes)
        failure = None
        for _ in sizes:
            index, result, error = self.result_queue.get()
            if error is not None and failure is None:
                failure = error
            results[index] = result
        self.command_queue.join()
        if failure is not None:
            raise failure
        return results


    def shutdown(self):
        '''
        Send every worker the stop sentinel and wait for it
        '''
        if not self.workers:
            return
        for _ in self.workers:
            self.command_queue.put(None)
        for worker in self.workers:
            worker.join()
        self.command_queue.close()
        self.result_queue.close()
        self.workers = []
        logging.info("Trial workers stopped")


def trial_worker(command_queue, result_queue):
    """
    Main loop of a worker process: run chunks until the None sentinel arrives
    """
    while True:
        command = command_queue.get()
        if command is None:
            command_queue.task_done()
            break

        index, task, count, seed, key = command
        logging.debug("Worker running chunk %d of %d trials", index, count)
        try:
            result_queue.put((index, task(count, SeededStreams(seed, key)), None))
        except Exception as e:
            result_queue.put((index, None, e))
        command_queue.task_done()
