"""FastAPI application for batch Steiner tree construction.

This module exposes a small REST API to upload a net file, route every net
in the background, poll job status, download the Excel report and fetch an
SVG of any net's best tree. It keeps a minimal in-memory job store (`JOBS`);
for production deployments a persistent job queue and storage should be used.
"""

import os
import uuid
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from fastapi import BackgroundTasks, FastAPI, File, HTTPException, UploadFile
from fastapi.responses import FileResponse, Response

from pipeline.encoding import RoutingMode, restore_pin_order, serialize
from pipeline.engine import RunConfig, StagePlan, default_seed, run_many
from pipeline.exporter import rows_to_excel
from pipeline.netfile import parse_netfile

load_dotenv()

# Root folder of the repository and a temporary directory for job artifacts
ROOT = Path(__file__).resolve().parent.parent
TMP = Path(os.getenv('STEINER_TMP', str(ROOT / 'tmp')))
TMP.mkdir(parents=True, exist_ok=True)

app = FastAPI(title='Steiner Tree Router')

# Simple in-memory job store. Keys are job_id and values hold status/logs/results.
JOBS = {}


@app.post('/upload')
async def upload(
    background: BackgroundTasks,
    file: UploadFile = File(...),
    mode: str = 'x',
    pop: int = 50,
    iters: int = 500,
    stages: str = 'E,PS,E,PS',
    k: int = 2,
    repeats: int = 1,
    seed: Optional[int] = None,
):
    """Upload a net file and start routing it in the background.

    Returns a `job_id` which can be used to poll `/status/{job_id}` and
    download the report when ready via `/download/{job_id}`.
    """
    if not file.filename.lower().endswith(('.net', '.txt')):
        raise HTTPException(status_code=400, detail='Only .net or .txt net files supported')
    content = (await file.read()).decode('utf-8', errors='replace')
    try:
        nets = parse_netfile(content)
        cfg = RunConfig(
            population=pop,
            evaluations=iters,
            mutation_points=k,
            mode=RoutingMode.parse(mode),
            seed=default_seed() if seed is None else seed,
            stage_plan=StagePlan.parse(stages),
        )
        if repeats < 1:
            raise ValueError(f'repeats must be >= 1, got {repeats}')
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))

    job_id = str(uuid.uuid4())
    job_dir = TMP / job_id
    job_dir.mkdir(parents=True, exist_ok=True)
    (job_dir / Path(file.filename).name).write_text(content, encoding='utf-8')

    config = dict(cfg.to_dict(), repeats=repeats)
    JOBS[job_id] = {'status': 'uploaded', 'logs': [], 'out': None, 'config': config}

    # enqueue background processing
    background.add_task(process_job, job_id, nets, cfg, repeats)
    return {'job_id': job_id}


def log(job_id: str, message: str):
    JOBS[job_id]['logs'].append(message)


def process_job(job_id: str, nets, cfg: RunConfig, repeats: int):
    """Background worker: route every net, then export the Excel report.

    Any exception marks the job as 'error' and the log keeps the message.
    """
    try:
        JOBS[job_id]['status'] = 'running'
        log(job_id, f'Routing {len(nets)} net(s) in mode {cfg.mode.value}, plan {cfg.stage_plan.label}...')
        rows = []
        trees = {}
        for net in nets:
            stats = run_many(net, cfg, repeats)
            best = min(stats.results, key=lambda r: r.best_length)
            particle = restore_pin_order(net, best.net, best.best)
            trees[net.name] = (net, particle)
            rows.append({
                'net': net.name, 'pins': net.n, 'mode': cfg.mode.value,
                'best': stats.best, 'mean': stats.mean, 'stddev': stats.stddev,
                'fitness': best.fitness, 'runtime': sum(stats.runtimes) / len(stats.runtimes),
                'particle': serialize(particle),
            })
            log(job_id, f'{net.name}: best {stats.best:.3f} (mean {stats.mean:.3f})')

        JOBS[job_id]['rows'] = rows
        JOBS[job_id]['trees'] = trees

        out_xlsx = TMP / job_id / 'report.xlsx'
        rows_to_excel(rows, str(out_xlsx), JOBS[job_id]['config'])
        JOBS[job_id]['out'] = str(out_xlsx)
        JOBS[job_id]['status'] = 'done'
        log(job_id, f'Wrote Excel to {out_xlsx}')
    except Exception as e:
        JOBS[job_id]['status'] = 'error'
        log(job_id, f'Error: {e}')


@app.get('/status/{job_id}')
async def status(job_id: str):
    job = JOBS.get(job_id)
    if not job:
        raise HTTPException(status_code=404, detail='job not found')
    return {key: value for key, value in job.items() if key != 'trees'}


@app.get('/download/{job_id}')
async def download(job_id: str):
    job = JOBS.get(job_id)
    if not job:
        raise HTTPException(status_code=404, detail='job not found')
    out = job.get('out')
    if not out:
        raise HTTPException(status_code=404, detail='output not ready')
    return FileResponse(out, media_type='application/vnd.openxmlformats-officedocument.spreadsheetml.sheet', filename=Path(out).name)


@app.get('/render/{job_id}/{net_name}')
async def render(job_id: str, net_name: str):
    from tools.svg_render import render_svg

    job = JOBS.get(job_id)
    if not job:
        raise HTTPException(status_code=404, detail='job not found')
    tree = job.get('trees', {}).get(net_name)
    if tree is None:
        raise HTTPException(status_code=404, detail='net not found or not routed yet')
    return Response(render_svg(*tree), media_type='image/svg+xml')


if __name__ == '__main__':
    import uvicorn

    uvicorn.run(app, host='0.0.0.0', port=int(os.getenv('PORT', '8000')))
