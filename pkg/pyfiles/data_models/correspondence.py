## @package correspondence
#  The package containing measured point pairs and the readers/writers of the file formats. \n
#  File formats :
#  - correspondence CSV : header x1,y1,x2,y2[,gx1,gy1,gx2,gy2], UTF-8, LF newlines
#  - camera JSON : {"cameras": [[12 numbers, row-major 3x4], ...]}
#  - fundamental JSON : {"fundamental": [9 numbers, row-major]} or a bare list of 9 numbers

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from pyfiles.data_models.errors import InputError

## Column names of the correspondence CSV.
measured_cols=['x1','y1','x2','y2']
gt_cols=['gx1','gy1','gx2','gy2']
## Format giving full round-trip precision for doubles.
float_format='%.17g'


def _frozen(v):
    arr=np.array(v,dtype=float)
    arr.setflags(write=False)
    return arr

## The class containing a measured point pair.
#  x1 is a point of image 1 and x2 a point of image 2, both in pixels.
#  gt1 and gt2 are the optional ground-truth projections.
@dataclass(frozen=True)
class correspondence:
    x1: np.ndarray
    x2: np.ndarray
    gt1: Optional[np.ndarray]=None
    gt2: Optional[np.ndarray]=None

    def __post_init__(self):
        object.__setattr__(self,'x1',_frozen(self.x1))
        object.__setattr__(self,'x2',_frozen(self.x2))
        if self.x1.shape!=(2,) or self.x2.shape!=(2,):
            raise InputError('image points must have two coordinates')
        if self.gt1 is not None:
            object.__setattr__(self,'gt1',_frozen(self.gt1))
            object.__setattr__(self,'gt2',_frozen(self.gt2))

    ## Define the stacked measurement \f$\tilde x = (\tilde x_1;\tilde x_2)\in\mathbb{R}^4\f$.
    @property
    def stacked(self):
        return np.concatenate([self.x1,self.x2])

    ## Define the stacked ground truth, or None.
    @property
    def gt_stacked(self):
        if self.gt1 is None:
            return None
        return np.concatenate([self.gt1,self.gt2])

    ## Build a correspondence from a stacked 4-vector.
    @classmethod
    def from_stacked(cls,x,gt=None):
        x=np.asarray(x,dtype=float)
        if gt is None:
            return cls(x[:2],x[2:])
        gt=np.asarray(gt,dtype=float)
        return cls(x[:2],x[2:],gt[:2],gt[2:])

    ## Return a copy whose measured points are replaced by the stacked vector x, keeping the ground truth.
    def corrected(self,x):
        x=np.asarray(x,dtype=float)
        return correspondence(x[:2],x[2:],self.gt1,self.gt2)

## Tags of the available triangulation methods.
method_tags=('weighted','exact','sampson','lindstrom','midpoint','dlt')

## The class containing the output of a triangulation method.
@dataclass(frozen=True)
class triangulation_result:

    ## @var corrected
    #  correspondence instance \n
    #  Corrected pair; the ground truth of the input is kept.
    #  @var cost2d
    #  float \n
    #  Squared 2D correction \f$\|\hat x-\tilde x\|^2\f$.
    #  @var method
    #  str \n
    #  One of method_tags.
    #  @var point3d
    #  ndarray[3] \n
    #  Recovered 3D point, or None.
    #  @var nu
    #  float \n
    #  Weight ratio used by the weighted method, or None.
    corrected: correspondence
    cost2d: float
    method: str
    point3d: Optional[np.ndarray]=None
    nu: Optional[float]=None

    def __post_init__(self):
        if self.method not in method_tags:
            raise ValueError('Invalid method '+repr(self.method))
        if not self.cost2d>=0:
            raise ValueError('cost2d must be nonnegative')

    ## Define the ground-truth distance \f$\|\hat x - x_{gt}\|\f$, or None without ground truth.
    @property
    def dist_gt(self):
        gt=self.corrected.gt_stacked
        if gt is None:
            return None
        return float(np.linalg.norm(self.corrected.stacked-gt))


## Read a correspondence CSV.
#  @param path
#  str \n
#  Path of the CSV file. An empty file or a header-only file gives an empty table.
#  @returns
#  pandas.DataFrame \n
#  Table with the measured columns and, when present, the ground-truth columns.
def read_matches(path):
    try:
        df=pd.read_csv(path,dtype=float,float_precision='round_trip',encoding='utf-8')
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=measured_cols,dtype=float)
    except FileNotFoundError as exc:
        raise InputError('matches file not found: '+str(path)) from exc
    missing=[c for c in measured_cols if c not in df.columns]
    if missing:
        raise InputError('matches file lacks columns '+','.join(missing))
    has_gt=all(c in df.columns for c in gt_cols)
    return df[measured_cols+(gt_cols if has_gt else [])]

## Write a table with full round-trip precision.
#  @param df
#  pandas.DataFrame \n
#  Table to write.
#  @param path
#  str \n
#  Output path.
def write_table(df,path):
    df.to_csv(path,index=False,float_format=float_format,lineterminator='\n',encoding='utf-8')

## Convert a correspondence table into a list of correspondence instances.
def to_correspondences(df):
    has_gt=all(c in df.columns for c in gt_cols)
    out=[]
    for row in df.itertuples(index=False):
        rd=row._asdict()
        x=[rd[c] for c in measured_cols]
        gt=[rd[c] for c in gt_cols] if has_gt else None
        out.append(correspondence.from_stacked(x,gt))
    return out

## Convert a list of correspondence instances into a table.
def to_table(corrs):
    rows=[]
    has_gt=len(corrs)>0 and all(c.gt1 is not None for c in corrs)
    for c in corrs:
        row=list(c.stacked)
        if has_gt:
            row+=list(c.gt_stacked)
        rows.append(row)
    cols=measured_cols+(gt_cols if has_gt else [])
    return pd.DataFrame(rows,columns=cols,dtype=float)

## Read a camera JSON file.
#  @param path
#  str \n
#  Path of the JSON file.
#  @returns
#  list \n
#  List of 3x4 ndarrays, one per camera.
def read_cameras(path):
    try:
        with open(path,encoding='utf-8') as fh:
            data=json.load(fh)
    except (OSError,json.JSONDecodeError) as exc:
        raise InputError('cannot read cameras file '+str(path)+': '+str(exc)) from exc
    if not isinstance(data,dict) or 'cameras' not in data:
        raise InputError('cameras file must hold a "cameras" list')
    cams=[]
    for entries in data['cameras']:
        arr=np.asarray(entries,dtype=float)
        if arr.size!=12:
            raise InputError('each camera needs 12 numbers')
        cams.append(arr.reshape(3,4))
    return cams

## Write a camera JSON file.
def write_cameras(cams,path):
    data={'cameras':[[float(v) for v in np.asarray(c,dtype=float).ravel()] for c in cams]}
    with open(path,'w',encoding='utf-8',newline='\n') as fh:
        json.dump(data,fh)
        fh.write('\n')

## Read a fundamental matrix JSON file.
#  @param path
#  str \n
#  Path of the JSON file.
#  @returns
#  ndarray[3,3]
def read_fundamental(path):
    try:
        with open(path,encoding='utf-8') as fh:
            data=json.load(fh)
    except (OSError,json.JSONDecodeError) as exc:
        raise InputError('cannot read fundamental file '+str(path)+': '+str(exc)) from exc
    if isinstance(data,dict):
        data=data.get('fundamental')
    arr=np.asarray(data,dtype=float)
    if arr.size!=9:
        raise InputError('a fundamental matrix needs 9 numbers')
    return arr.reshape(3,3)

## Parse a "x1,y1,x2,y2" string.
def parse_point(text):
    try:
        vals=[float(v) for v in text.split(',')]
    except ValueError as exc:
        raise InputError('cannot parse point '+repr(text)) from exc
    if len(vals)!=4:
        raise InputError('a point needs four comma-separated numbers')
    return correspondence.from_stacked(vals)
