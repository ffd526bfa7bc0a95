import json

import numpy as np
import pandas as pd
import pytest

from pyfiles.benchmark.cli import EXIT_INPUT, EXIT_OK, main
from pyfiles.data_models.correspondence import to_table, write_cameras, write_table
from pyfiles.data_models.triangulator import triangulator


@pytest.fixture
def pair_files(generic_scene,tmp_path):
    cams=tmp_path/'cams.json'
    write_cameras([c.entries for c in generic_scene['cameras']],cams)
    matches=tmp_path/'matches.csv'
    write_table(to_table(generic_scene['correspondences'][:10]),matches)
    fund=tmp_path/'f.json'
    fund.write_text(json.dumps({'fundamental':[1.0,0,0,0,0.05,0,0,0,0]}))
    return cams,matches,fund


def test_triangulate(pair_files,tmp_path):
    cams,matches,_=pair_files
    out=tmp_path/'out.csv'
    assert main(['triangulate','--cameras',str(cams),'--matches',str(matches),'--method','exact','--out',str(out)])==EXIT_OK
    df=pd.read_csv(out,keep_default_na=False)
    assert len(df)==10 and list(df.columns)==['x1','y1','x2','y2','cost2d','X','Y','Z','err']
    assert (df['err']=='').all()


def test_triangulate_to_stdout(pair_files,capsys):
    cams,matches,_=pair_files
    assert main(['triangulate','--cameras',str(cams),'--matches',str(matches)])==EXIT_OK
    lines=capsys.readouterr().out.splitlines()
    assert lines[0].startswith('x1,y1,x2,y2') and len(lines)==11


def test_empty_matches(pair_files,tmp_path,capsys):
    cams,_,_=pair_files
    empty=tmp_path/'empty.csv'
    empty.write_text('x1,y1,x2,y2\n')
    assert main(['triangulate','--cameras',str(cams),'--matches',str(empty)])==EXIT_OK
    assert len(capsys.readouterr().out.splitlines())==1


def test_missing_cameras_file(pair_files,tmp_path):
    _,matches,_=pair_files
    assert main(['triangulate','--cameras',str(tmp_path/'none.json'),'--matches',str(matches)])==EXIT_INPUT


def test_census(tmp_path):
    out=tmp_path/'census.csv'
    assert main(['census','--case','1','--n','50','--out',str(out)])==EXIT_OK
    assert len(pd.read_csv(out))==50


def test_sweep(pair_files,tmp_path):
    _,_,fund=pair_files
    out=tmp_path/'sweep.csv'
    assert main(['sweep','--fundamental',str(fund),'--point','1,0.02,1.1,-0.03','--n','360','--out',str(out)])==EXIT_OK
    df=pd.read_csv(out)
    assert len(df)==360 and np.all(df['unweighted']>=0)


def test_bounds(pair_files,generic_scene,tmp_path):
    _,matches,_=pair_files
    fund=tmp_path/'scene_f.json'
    F=triangulator(cameras=generic_scene['cameras']).fundamental.F
    fund.write_text(json.dumps({'fundamental':F.ravel().tolist()}))
    out=tmp_path/'bounds.csv'
    assert main(['bounds','--fundamental',str(fund),'--matches',str(matches),'--radius','3','--out',str(out)])==EXIT_OK
    df=pd.read_csv(out)
    assert len(df)==10 and np.all(df['lower']<=df['upper'])
    assert set(df['inlier'])<={0,1}


def test_bench_and_trend(tmp_path):
    cfg=tmp_path/'scene.json'
    cfg.write_text(json.dumps({'n_points':30,'seed':1}))
    out=tmp_path/'metrics.csv'
    matches=tmp_path/'m.csv'
    assert main(['bench','--config',str(cfg),'--methods','weighted','exact','--out',str(out),
                 '--matches-out',str(matches)])==EXIT_OK
    df=pd.read_csv(out,keep_default_na=False)
    assert set(df['method'])=={'weighted','exact'}
    assert len(df)==2*len(pd.read_csv(matches))
    trend=tmp_path/'trend.csv'
    cfg.write_text(json.dumps({'n_points':100,'seed':1}))
    assert main(['trend','--ratios','1','2','--config',str(cfg),'--out',str(trend)])==EXIT_OK
    assert len(pd.read_csv(trend))==2
