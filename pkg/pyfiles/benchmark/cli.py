## @package cli
#  The package containing the command-line interface. \n
#  Subcommands :
#  - triangulate : correct every correspondence of a matches file with one method
#  - bench : synthetic scene benchmark of several methods
#  - sweep : cost per epipolar plane of one correspondence
#  - census : degree census of the critical polynomial
#  - bounds : error bounds and inlier flags of a matches file
#  - trend : weighted/exact error ratio over rigs of growing eigenvalue ratio
#
#  Exit codes : 0 on success, 1 on an input error, 2 when a check of the run fails.

import argparse
import logging
import sys

import numpy as np
import pandas as pd

import pyfiles.data_models.constants as constants
from pyfiles.data_models.correspondence import (method_tags, parse_point, read_cameras,
                                                read_fundamental, read_matches,
                                                to_correspondences, to_table, write_table)
from pyfiles.data_models.errors import InputError, TriangulationError
from pyfiles.data_models.triangulator import triangulator
import pyfiles.models.epipolar.epipolar_funcs as epipolar_funcs
import pyfiles.models.bounds.bounds_funcs as bounds_funcs
import pyfiles.benchmark.results as results
import pyfiles.benchmark.scene as scene

logger=logging.getLogger(__name__)

EXIT_OK=0
EXIT_INPUT=1
EXIT_CHECK=2

def _cameras(path):
    cams=read_cameras(path)
    if len(cams)!=2:
        raise InputError('cameras file must hold exactly two cameras')
    return tuple(epipolar_funcs.camera_matrix(c) for c in cams)

def _emit(df,out):
    if out is None:
        sys.stdout.write(df.to_csv(index=False,float_format='%.17g',lineterminator='\n'))
    else:
        write_table(df,out)

## Run the triangulate subcommand.
#  Failed correspondences keep NaN coordinates and the error in the err column.
#  @param args
#  argparse.Namespace instance with cameras, matches, method and out
#  @returns
#  int \n
#  Exit code.
def cmd_triangulate(args):
    tri=triangulator(cameras=_cameras(args.cameras))
    corrs=to_correspondences(read_matches(args.matches))
    rows=[]
    for c in corrs:
        row={'x1':np.nan,'y1':np.nan,'x2':np.nan,'y2':np.nan,'cost2d':np.nan,
             'X':np.nan,'Y':np.nan,'Z':np.nan,'err':''}
        try:
            res=tri.triangulate(c,args.method)
        except TriangulationError as exc:
            row['err']=type(exc).__name__+': '+str(exc)
        else:
            row.update(zip(('x1','y1','x2','y2'),res.corrected.stacked))
            row['cost2d']=res.cost2d
            if res.point3d is not None:
                row.update(zip(('X','Y','Z'),res.point3d))
        rows.append(row)
    df=pd.DataFrame(rows,columns=['x1','y1','x2','y2','cost2d','X','Y','Z','err'])
    _emit(df,args.out)
    logger.info('triangulated %d correspondences with %s',len(corrs),args.method)
    return EXIT_OK

## Run the bench subcommand.
#  @returns
#  int \n
#  EXIT_CHECK when a correspondence violates the error bounds.
def cmd_bench(args):
    cfg=constants.scene_dict.from_json(args.config) if args.config else scene.scene_dict_in
    sc=scene.synth_scene(cfg)
    if args.matches_out:
        write_table(to_table(sc['correspondences']),args.matches_out)
    _,report=results.run_benchmark(sc['cameras'],sc['correspondences'],args.methods,out=args.out)
    logger.info('summary:\n%s',report.summary.to_string())
    return EXIT_CHECK if report.violations else EXIT_OK

## Run the sweep subcommand and log the local minima of both curves.
def cmd_sweep(args):
    f=epipolar_funcs.fundamental_matrix(read_fundamental(args.fundamental))
    df=results.sweep_epipolar_cost(f,parse_point(args.point),n_angles=args.n)
    _emit(df,args.out)
    logger.info('local minima: unweighted %d, weighted %d',
                results.count_local_minima(df['unweighted']),results.count_local_minima(df['weighted']))
    return EXIT_OK

## Run the census subcommand.
#  @returns
#  int \n
#  EXIT_CHECK when a sample has an unexpected degree.
def cmd_census(args):
    df=results.degree_census(args.n,args.case,args.seed)
    if args.out:
        write_table(df,args.out)
    failures=int((~df['ok']).sum())
    if failures:
        logger.error('%d of %d census samples have an unexpected degree',failures,len(df))
        return EXIT_CHECK
    return EXIT_OK

## Run the bounds subcommand.
#  @param args
#  argparse.Namespace instance with fundamental, matches, radius and out
#  @returns
#  int \n
#  Exit code.
def cmd_bounds(args):
    tri=triangulator(fundamental=read_fundamental(args.fundamental))
    corrs=to_correspondences(read_matches(args.matches))
    d=tri.diag
    cols=['lower','best_upper','upper','ratio','inlier']
    if corrs:
        Y=epipolar_funcs.to_local(d,np.stack([c.stacked for c in corrs]))
        b=bounds_funcs.error_bounds_batch(Y,d.a1,d.a2)
        df=pd.DataFrame({'lower':b.lower,'best_upper':b.best_upper,'upper':b.upper,'ratio':b.ratio,
                         'inlier':tri.inliers(corrs,args.radius).astype(int)},columns=cols)
    else:
        df=pd.DataFrame(columns=cols)
    _emit(df,args.out)
    return EXIT_OK

## Run the trend subcommand.
#  @returns
#  int \n
#  EXIT_CHECK when the weighted error falls below the exact one.
def cmd_trend(args):
    cfg=constants.scene_dict.from_json(args.config) if args.config else scene.scene_dict_in
    df=results.ratio_trend(args.ratios,cfg)
    if args.out:
        write_table(df,args.out)
    return EXIT_CHECK if bool((df['mean_ratio']<1-1e-9).any()) else EXIT_OK

## Define the argument parser.
#  @returns
#  argparse.ArgumentParser instance
def build_parser():
    parser=argparse.ArgumentParser(prog='pyfiles',description='Two-view triangulation by a reweighted cost.')
    parser.add_argument('-v','--verbose',action='count',default=0,help='-v for info, -vv for debug messages.')
    sub=parser.add_subparsers(dest='command',required=True)

    p=sub.add_parser('triangulate',help='Correct every correspondence of a matches file.')
    p.add_argument('--cameras',required=True,help='Camera JSON file with two cameras.')
    p.add_argument('--matches',required=True,help='Correspondence CSV.')
    p.add_argument('--method',choices=method_tags,default='weighted')
    p.add_argument('--out',default=None,help='Output CSV; stdout when omitted.')
    p.set_defaults(func=cmd_triangulate)

    p=sub.add_parser('bench',help='Benchmark methods on a synthetic scene.')
    p.add_argument('--config',default=None,help='Scene JSON file; default scene when omitted.')
    p.add_argument('--methods',nargs='+',choices=method_tags,default=list(constants.solver_dict().methods))
    p.add_argument('--out',default=None,help='Metrics CSV.')
    p.add_argument('--matches-out',default=None,help='Write the synthetic correspondences to this CSV.')
    p.set_defaults(func=cmd_bench)

    p=sub.add_parser('sweep',help='Cost per epipolar plane of one correspondence.')
    p.add_argument('--fundamental',required=True,help='Fundamental matrix JSON file.')
    p.add_argument('--point',required=True,help='"x1,y1,x2,y2"')
    p.add_argument('--n',type=int,default=constants.solver_dict().n_angles,help='Number of angles.')
    p.add_argument('--out',default=None)
    p.set_defaults(func=cmd_sweep)

    p=sub.add_parser('census',help='Degree census of the critical polynomial.')
    p.add_argument('--case',type=int,choices=(1,2,3),required=True)
    p.add_argument('--n',type=int,default=1000)
    p.add_argument('--seed',type=int,default=0)
    p.add_argument('--out',default=None)
    p.set_defaults(func=cmd_census)

    p=sub.add_parser('bounds',help='Error bounds and inlier flags of a matches file.')
    p.add_argument('--fundamental',required=True)
    p.add_argument('--matches',required=True)
    p.add_argument('--radius',type=float,required=True,help='Inlier radius in pixels.')
    p.add_argument('--out',default=None)
    p.set_defaults(func=cmd_bounds)

    p=sub.add_parser('trend',help='Weighted/exact error ratio against the eigenvalue ratio.')
    p.add_argument('--ratios',type=float,nargs='+',default=[1.0,1.5,2.0,4.0])
    p.add_argument('--config',default=None)
    p.add_argument('--out',default=None)
    p.set_defaults(func=cmd_trend)
    return parser

## Run the command-line interface.
#  @param argv (optional)
#  list of str \n
#  Arguments, sys.argv[1:] when None.
#  @returns
#  int \n
#  Exit code.
def main(argv=None):
    parser=build_parser()
    args=parser.parse_args(argv)
    level=logging.WARNING-10*min(args.verbose,2)
    logging.basicConfig(level=level,format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    try:
        return args.func(args)
    except (TriangulationError,ValueError) as exc:
        logger.error('%s: %s',type(exc).__name__,exc)
        return EXIT_INPUT
    except AssertionError as exc:
        logger.error('check failed: %s',exc)
        return EXIT_CHECK
