import json

import numpy as np
import pytest

from pyfiles.data_models.correspondence import (correspondence, parse_point, read_cameras,
                                                read_fundamental, read_matches, to_correspondences,
                                                to_table, triangulation_result, write_cameras,
                                                write_table)
from pyfiles.data_models.errors import InputError
from pyfiles.data_models.triangulator import triangulator


def test_correspondence_fields():
    c=correspondence.from_stacked([1,2,3,4],[1.5,2,3,4])
    assert np.array_equal(c.stacked,[1,2,3,4])
    moved=c.corrected([0,0,0,0])
    assert np.array_equal(moved.gt_stacked,[1.5,2,3,4])
    with pytest.raises(InputError):
        correspondence(np.zeros(3),np.zeros(2))
    with pytest.raises(ValueError):
        c.x1[0]=5.0


def test_result_checks():
    c=correspondence.from_stacked([0,0,0,0],[3,4,0,0])
    res=triangulation_result(corrected=c,cost2d=1.0,method='exact')
    assert res.dist_gt==pytest.approx(5.0)
    assert triangulation_result(corrected=correspondence.from_stacked(np.zeros(4)),cost2d=0.0,method='dlt').dist_gt is None
    with pytest.raises(ValueError):
        triangulation_result(corrected=c,cost2d=1.0,method='ransac')
    with pytest.raises(ValueError):
        triangulation_result(corrected=c,cost2d=-1.0,method='exact')


def test_matches_file_keeps_full_precision(tmp_path,rng):
    corrs=[correspondence.from_stacked(x,x+1e-3) for x in rng.normal(scale=500,size=(500,4))]
    path=tmp_path/'m.csv'
    write_table(to_table(corrs),path)
    back=to_correspondences(read_matches(path))
    assert np.array_equal(np.stack([c.stacked for c in back]),np.stack([c.stacked for c in corrs]))
    assert np.array_equal(back[3].gt_stacked,corrs[3].gt_stacked)
    assert path.read_bytes().count(b'\r')==0


def test_matches_file_errors(tmp_path):
    empty=tmp_path/'empty.csv'
    empty.write_text('')
    assert len(read_matches(empty))==0
    header=tmp_path/'header.csv'
    header.write_text('x1,y1,x2,y2\n')
    assert to_correspondences(read_matches(header))==[]
    bad=tmp_path/'bad.csv'
    bad.write_text('x1,y1\n1,2\n')
    with pytest.raises(InputError):
        read_matches(bad)
    with pytest.raises(InputError):
        read_matches(tmp_path/'missing.csv')


def test_camera_and_fundamental_files(tmp_path):
    P=[np.hstack([np.eye(3),np.zeros((3,1))]),np.hstack([np.eye(3),np.array([[1.0],[0.5],[1.0]])])]
    path=tmp_path/'cams.json'
    write_cameras(P,path)
    back=read_cameras(path)
    assert len(back)==2 and np.array_equal(back[1],P[1])
    (tmp_path/'bad.json').write_text(json.dumps({'cameras':[[1,2,3]]}))
    with pytest.raises(InputError):
        read_cameras(tmp_path/'bad.json')
    (tmp_path/'f.json').write_text(json.dumps({'fundamental':[1,0,0,0,0.5,0,0,0,0]}))
    assert np.array_equal(read_fundamental(tmp_path/'f.json'),np.diag([1,0.5,0]))
    (tmp_path/'g.json').write_text(json.dumps([1,0,0,0,0.5,0,0,0]))
    with pytest.raises(InputError):
        read_fundamental(tmp_path/'g.json')


def test_parse_point():
    c=parse_point('1,2.5,-3,4e2')
    assert np.array_equal(c.stacked,[1,2.5,-3,400])
    with pytest.raises(InputError):
        parse_point('1,2,3')
    with pytest.raises(InputError):
        parse_point('a,b,c,d')


def test_triangulator_dispatch(generic_scene):
    cams=generic_scene['cameras']
    tri=triangulator(cameras=cams)
    c=generic_scene['correspondences'][1]
    costs={m:tri.triangulate(c,m).cost2d for m in ('weighted','exact','sampson','lindstrom','midpoint','dlt')}
    assert costs['exact']<=costs['weighted']*(1+1e-12)
    for m in ('sampson','lindstrom','midpoint','dlt'):
        assert costs[m]>=0
    with pytest.raises(ValueError):
        tri.triangulate(c,'ransac')
    only_f=triangulator(fundamental=tri.fundamental)
    with pytest.raises(InputError):
        only_f.triangulate(c,'midpoint')
    assert only_f.triangulate(c,'exact').point3d is None
    with pytest.raises(InputError):
        triangulator()
    assert triangulator(fundamental=tri.fundamental.F).diag.a1==pytest.approx(tri.diag.a1)


def test_triangulator_inliers(generic_scene):
    tri=triangulator(cameras=generic_scene['cameras'])
    corrs=generic_scene['correspondences']
    inl=tri.inliers(corrs,3.0)
    assert inl.shape==(len(corrs),) and inl.any()
    assert tri.inliers([],3.0).shape==(0,)
    for c,flag in zip(corrs[:20],inl[:20]):
        if flag:
            assert tri.triangulate(c,'exact').cost2d<9.0
        assert tri.bounds(c).lower<=np.sqrt(tri.triangulate(c,'exact').cost2d)*(1+1e-9)
